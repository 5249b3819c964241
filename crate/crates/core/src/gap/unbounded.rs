use num_traits::{One, Signed, ToPrimitive, Zero};

use super::generators::unit;
use super::GapError;
use crate::ambiguous::validate;
use crate::lp;
use crate::model::{AmbiguousContract, Certificate, Contract, Instance};
use crate::rational::{ceil_to_grid, from_f64, int, rat, to_f64, Rational};

/// Parameters of the unbounded-gap construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnboundedSpec {
    /// Layer granularity; costs rise along harmonic sums starting at `x + 1`.
    pub x: u32,
    /// Welfare of the target action.
    pub delta: Rational,
    /// Rewards with `r_1 = 0`, `r_2 ≥ 1`, strictly increasing, at least three.
    pub rewards: Vec<Rational>,
    /// Full-support target distribution with expected reward exactly 1.
    pub target: Vec<Rational>,
}

impl UnboundedSpec {
    /// Three outcomes `r = (0, 1, 2)` and target `(1/4, 1/2, 1/4)`.
    pub fn new(x: u32, delta: Rational) -> Self {
        Self {
            x,
            delta,
            rewards: vec![int(0), int(1), int(2)],
            target: vec![rat(1, 4), rat(1, 2), rat(1, 4)],
        }
    }
}

/// A mixture of other actions reproducing the target's distribution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Replication {
    /// `(sorted action index, weight)`.
    pub weights: Vec<(usize, Rational)>,
    pub cost: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnboundedGap {
    pub instance: Instance,
    /// Sorted index of the target action.
    pub target: usize,
    pub target_cost: Rational,
    pub u_bar: Rational,
    /// Sorted action indices per layer, one per outcome `j ≥ 2`; the last
    /// layer is the one whose expected reward equals the target's.
    pub layers: Vec<Vec<usize>>,
    /// Sorted index of the point mass on the zero outcome.
    pub zero_action: usize,
    pub tau: AmbiguousContract,
    pub certificate: Certificate,
    pub replication: Replication,
    pub harmonic_bound_verified: bool,
}

fn g(u: f64, x: f64, delta: f64) -> f64 {
    1.0 - u - u * (1.0 / u).ln() + u / (2.0 * x) - (1.0 - delta)
}

/// Root of `1 − u − u ln(1/u) + u/(2x) = 1 − δ` in `(0, 1)`.
fn solve_u_bar(x: u32, delta: f64) -> Result<f64, GapError> {
    let xf = f64::from(x);
    let (mut lo, mut hi) = (f64::MIN_POSITIVE, (-1.0 / (2.0 * xf)).exp());
    if g(hi, xf, delta) >= 0.0 {
        return Err(GapError::Parameters("δ too close to 1 for this x".into()));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid, xf, delta) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(hi)
}

/// `−W₋₁(−δ / e^{1 − 1/(2x)})`, the gap the construction targets.
pub fn target_ratio(x: u32, delta: f64) -> Result<f64, GapError> {
    Ok(delta / solve_u_bar(x, delta)?)
}

/// A `δ` (multiple of `10⁻⁹`, rounded down) whose target gap is at least `z`.
pub fn delta_for_target(z: f64, x: u32) -> Result<Rational, GapError> {
    if z.is_nan() || z <= 1.0 {
        return Err(GapError::Parameters("target gap must exceed 1".into()));
    }
    let padded = z * (1.0 + 1e-6);
    let delta = padded * (-padded).exp() * (1.0 - 1.0 / (2.0 * f64::from(x))).exp();
    let grid = 1_000_000_000i64;
    let scaled = from_f64(delta).ok_or_else(|| GapError::Parameters("non-finite δ".into()))?
        * int(grid);
    Ok(Rational::from_integer(scaled.floor().to_integer()) / int(grid))
}

fn check_spec(spec: &UnboundedSpec) -> Result<(), GapError> {
    let m = spec.rewards.len();
    let bad = |msg: &str| Err(GapError::Parameters(msg.into()));
    if spec.x == 0 {
        return bad("x must be positive");
    }
    if !spec.delta.is_positive() || spec.delta >= Rational::one() {
        return bad("δ must lie in (0, 1)");
    }
    if m < 3 || spec.target.len() != m {
        return bad("need at least three outcomes and a matching target row");
    }
    if !spec.rewards[0].is_zero() || spec.rewards[1] < Rational::one() {
        return bad("need r_1 = 0 and r_2 ≥ 1");
    }
    if spec.rewards.windows(2).any(|w| w[0] >= w[1]) {
        return bad("rewards must be strictly increasing");
    }
    if spec.target.iter().any(|p| !p.is_positive()) || !spec.target.iter().sum::<Rational>().is_one() {
        return bad("target row must be a full-support distribution");
    }
    let reward: Rational = spec.target.iter().zip(&spec.rewards).map(|(p, r)| p * r).sum();
    if !reward.is_one() {
        return bad("target row must have expected reward 1");
    }
    Ok(())
}

/// Builds the instance in which the target is unimplementable by any single
/// contract, every other action earns the principal at most `ū`, and the
/// target is implemented at cost by two SOP contracts.
pub fn gen_unbounded_gap(spec: &UnboundedSpec) -> Result<UnboundedGap, GapError> {
    check_spec(spec)?;
    let root = solve_u_bar(spec.x, to_f64(&spec.delta))?;
    let mut u_bar = ceil_to_grid(root, 1_000_000_000_000);
    for attempt in 0..24 {
        match build(spec, &u_bar)? {
            Some(gap) => return Ok(gap),
            None => {
                // Costs of the top layer fall as ū grows.
                let nudge = rat(1, 1_000_000_000) * int(1 << attempt);
                u_bar = &u_bar * (Rational::one() + nudge);
            }
        }
    }
    Err(GapError::Construction("top layer never dropped below the target cost".into()))
}

fn build(spec: &UnboundedSpec, u_bar: &Rational) -> Result<Option<UnboundedGap>, GapError> {
    let one = Rational::one();
    let x = int(i64::from(spec.x));
    let m = spec.rewards.len();
    let target_cost = &one - &spec.delta;
    let span = &x * (&one - u_bar) / u_bar;
    let full_layers = span.floor().to_integer().to_usize().ok_or_else(|| {
        GapError::Parameters("layer count does not fit in memory".into())
    })?;

    // (expected reward, cost) per layer.
    let mut layer_values = Vec::with_capacity(full_layers + 2);
    let mut cost = Rational::zero();
    let step = u_bar / &x;
    for l in 0..=full_layers {
        if l > 0 {
            cost += &step - u_bar / (&x + int(l as i64));
        }
        layer_values.push((u_bar + &step * int(l as i64), cost.clone()));
    }
    let last_reward = layer_values.last().expect("layer zero").0.clone();
    if last_reward != one {
        cost += (&one - &last_reward) * (&one - u_bar);
        layer_values.push((one.clone(), cost.clone()));
    }
    let top_cost = cost;
    if top_cost >= target_cost {
        return Ok(None);
    }
    let harmonic_bound_verified = harmonic_bound(spec.x, u_bar, &layer_values[..=full_layers]);

    let mut costs = vec![Rational::zero()];
    let mut probs = vec![unit(m, 0)];
    for (reward, cost) in &layer_values {
        for j in 1..m {
            let pj = reward / &spec.rewards[j];
            let mut row = vec![Rational::zero(); m];
            row[0] = &one - &pj;
            row[j] = pj;
            costs.push(cost.clone());
            probs.push(row);
        }
    }
    let target_original = costs.len();
    costs.push(target_cost.clone());
    probs.push(spec.target.clone());
    let instance = Instance::new(costs, spec.rewards.clone(), probs)?;
    let pos = |k: usize| instance.action_position(k).expect("action present");
    let target = pos(target_original);
    let layers: Vec<Vec<usize>> = (0..layer_values.len())
        .map(|l| (1..m).map(|j| pos(1 + l * (m - 1) + (j - 1))).collect())
        .collect();
    let zero_action = pos(0);

    let tau = AmbiguousContract::new(vec![
        Contract::sop(m, 1, &target_cost / &spec.target[1]),
        Contract::sop(m, m - 1, &target_cost / &spec.target[m - 1]),
    ])?;
    let certificate = validate(&instance, &tau, target);
    if !certificate.passed() {
        return Err(GapError::Construction("target SOP pair fails validation".into()));
    }

    let top = layers.last().expect("at least one layer");
    let weights: Vec<(usize, Rational)> = (1..m)
        .map(|j| (top[j - 1], &spec.target[j] * &spec.rewards[j]))
        .collect();
    let replication = replicate(&instance, &weights, target)?;

    Ok(Some(UnboundedGap {
        instance,
        target,
        target_cost,
        u_bar: u_bar.clone(),
        layers,
        zero_action,
        tau,
        certificate,
        replication,
        harmonic_bound_verified,
    }))
}

fn replicate(
    inst: &Instance,
    weights: &[(usize, Rational)],
    target: usize,
) -> Result<Replication, GapError> {
    let mut row = vec![Rational::zero(); inst.m()];
    let mut cost = Rational::zero();
    for (i, w) in weights {
        for (acc, p) in row.iter_mut().zip(inst.row(*i)) {
            *acc += w * p;
        }
        cost += w * inst.cost(*i);
    }
    let total: Rational = weights.iter().map(|(_, w)| w.clone()).sum();
    if !total.is_one() || row != inst.row(target) || cost >= *inst.cost(target) {
        return Err(GapError::Construction("replicating mixture does not undercut the target".into()));
    }
    Ok(Replication { weights: weights.to_vec(), cost })
}

/// Checks `c_ℓ < ū(ℓ/x − ln((x+ℓ)/x) + 1/(2x))` for every regular layer,
/// comparing each exact cost against a floating bound shrunk by a margin
/// far larger than the rounding error of the few operations involved.
fn harmonic_bound(x: u32, u_bar: &Rational, layers: &[(Rational, Rational)]) -> bool {
    let xf = f64::from(x);
    let u = to_f64(u_bar);
    layers.iter().enumerate().all(|(l, (_, cost))| {
        let lf = l as f64;
        let bound = u * (lf / xf - ((xf + lf) / xf).ln() + 1.0 / (2.0 * xf));
        let margin = 1e-9 * u * (1.0 + lf / xf);
        match from_f64(bound - margin) {
            Some(b) => *cost < b,
            None => false,
        }
    })
}

impl UnboundedGap {
    /// Upper bounds on the principal's best single-contract utility from
    /// each non-target action, indexed like the instance (target slot holds
    /// `None`). Each regular action is compared only against its
    /// predecessor in the same outcome column; adding the remaining actions
    /// can only raise the minimum payment.
    pub fn single_utility_bounds(&self) -> Result<Vec<Option<Rational>>, GapError> {
        let inst = &self.instance;
        let mut bounds: Vec<Option<Rational>> = vec![None; inst.n()];
        bounds[self.zero_action] = Some(inst.expected_reward(self.zero_action));
        for &a in &self.layers[0] {
            bounds[a] = Some(inst.expected_reward(a));
        }
        for pair in self.layers.windows(2) {
            for (&prev, &cur) in pair[0].iter().zip(&pair[1]) {
                let sub = inst.restrict_actions(&[prev, cur])?;
                let bound = match lp::min_payment(&sub, 1, false)? {
                    Some(mp) => inst.expected_reward(cur) - mp.payment,
                    None => inst.expected_reward(cur) - inst.cost(cur),
                };
                bounds[cur] = Some(bound);
            }
        }
        Ok(bounds)
    }

    /// `ū` bounds every non-target action's single-contract utility.
    pub fn claim_holds(&self) -> Result<bool, GapError> {
        Ok(self
            .single_utility_bounds()?
            .iter()
            .enumerate()
            .all(|(i, b)| i == self.target || b.as_ref().is_some_and(|b| *b <= self.u_bar)))
    }

    /// Principal utility of the at-cost SOP pair on the target.
    pub fn target_utility(&self) -> Rational {
        self.instance.expected_reward(self.target) - &self.target_cost
    }
}
