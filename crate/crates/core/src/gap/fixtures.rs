use num_traits::{One, Signed, Zero};

use super::GapError;
use crate::model::Instance;
use crate::rational::{int, parse_rational, rat, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FixtureSpec {
    /// Three actions, three outcomes; ambiguity lifts the principal from 2 to 3.
    Example1,
    /// `m` zero-cost actions each missing one outcome, plus a costly target
    /// that needs all `m` SOP contracts. Rewards are `(0, δ, 2δ, …, m − 1)`.
    SopTight { m: usize, delta: Rational },
    /// Monotone instance with four outcomes whose monotone gap grows like `n`.
    MonotoneOmega { n: usize, eps: Rational, gamma: Rational, delta: Rational },
    /// Four actions over six outcomes satisfying MLRP.
    MlrpB4,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fixture {
    pub name: String,
    pub instance: Instance,
    /// Named reference values the fixture is known to attain.
    pub reference: Vec<(String, Rational)>,
}

impl Fixture {
    pub fn reference(&self, key: &str) -> Option<&Rational> {
        self.reference.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }
}

fn dec(s: &str) -> Rational {
    parse_rational(s).expect("literal")
}

fn rows(table: &[&[&str]]) -> Vec<Vec<Rational>> {
    table.iter().map(|row| row.iter().map(|s| dec(s)).collect()).collect()
}

pub fn gen_fixture(spec: &FixtureSpec) -> Result<Fixture, GapError> {
    match spec {
        FixtureSpec::Example1 => Ok(Fixture {
            name: "example1".into(),
            instance: Instance::new(
                vec![int(0), int(0), int(1)],
                vec![int(0), int(4), int(8)],
                rows(&[&["1/2", "1/2", "0"], &["3/4", "0", "1/4"], &["1/4", "1/2", "1/4"]]),
            )?,
            reference: vec![
                ("single_utility".into(), int(2)),
                ("ambiguous_utility".into(), int(3)),
                ("ambiguous_payment".into(), int(1)),
                ("rho".into(), rat(3, 2)),
            ],
        }),
        FixtureSpec::SopTight { m, delta } => sop_tight(*m, delta),
        FixtureSpec::MonotoneOmega { n, eps, gamma, delta } => monotone_omega(*n, eps, gamma, delta),
        FixtureSpec::MlrpB4 => Ok(Fixture {
            name: "mlrp_b4".into(),
            instance: Instance::new(
                vec![dec("0.1"), int(1), int(2), dec("2.2")],
                vec![int(1), int(2), int(5), dec("5.1"), dec("5.2"), dec("5.3")],
                rows(&[
                    &["0.4", "0.4", "0.2", "0", "0", "0"],
                    &["0", "0.35", "0.35", "0.3", "0", "0"],
                    &["0", "0", "0.4", "0.35", "0.15", "0.1"],
                    &["0", "0", "0", "0.38", "0.37", "0.25"],
                ]),
            )?,
            reference: vec![
                ("single_utility".into(), dec("2.987")),
                ("ambiguous_utility".into(), dec("3.095")),
                ("ambiguous_payment".into(), int(2)),
            ],
        }),
    }
}

fn sop_tight(m: usize, delta: &Rational) -> Result<Fixture, GapError> {
    if m < 4 {
        return Err(GapError::Parameters("sop_tight needs m ≥ 4".into()));
    }
    let step_cap = rat(m as i64 - 1, m as i64 - 2);
    if !delta.is_positive() || *delta >= step_cap {
        return Err(GapError::Parameters("δ must be positive and keep rewards increasing".into()));
    }
    let k = m as i64 - 1;
    let mut rewards: Vec<Rational> = (0..m - 1).map(|j| delta * int(j as i64)).collect();
    rewards.push(int(k));
    let mut probs: Vec<Vec<Rational>> = (0..m)
        .map(|i| (0..m).map(|j| if i == j { Rational::zero() } else { rat(1, k) }).collect())
        .collect();
    let mut target = vec![rat(1, k * k); m - 1];
    target.push(Rational::one() - rat(1, k));
    probs.push(target);
    let mut costs = vec![Rational::zero(); m];
    costs.push(Rational::one());
    Ok(Fixture {
        name: "sop_tight".into(),
        instance: Instance::new(costs, rewards, probs)?,
        reference: vec![
            ("target_action".into(), int(m as i64)),
            ("ambiguous_payment".into(), Rational::one()),
            ("single_payment".into(), rat(m as i64 - 2, m as i64 - 3)),
            ("minimum_support".into(), int(m as i64)),
        ],
    })
}

fn monotone_omega(
    n: usize,
    eps: &Rational,
    gamma: &Rational,
    delta: &Rational,
) -> Result<Fixture, GapError> {
    let one = Rational::one();
    if n < 3 || !eps.is_positive() || *eps >= one || !delta.is_positive() || *delta >= one {
        return Err(GapError::Parameters("need n ≥ 3 and ε, δ in (0, 1)".into()));
    }
    if !gamma.is_positive() {
        return Err(GapError::Parameters("γ must be positive".into()));
    }
    let inv = |k: usize| num_traits::pow(eps.recip(), k);
    let top = inv(n - 2);
    let rewards = vec![Rational::zero(), top.clone(), &top + gamma, &top + gamma * int(2)];
    let mut costs = Vec::with_capacity(n);
    let mut probs = Vec::with_capacity(n);
    for i in 1..n {
        costs.push(inv(i - 1) - int(i as i64) + eps * int(i as i64 - 1));
    }
    costs.push(top.clone());
    for i in 1..n - 1 {
        let e = num_traits::pow(eps.clone(), n - 1 - i);
        probs.push(vec![&one - &e, e, Rational::zero(), Rational::zero()]);
    }
    probs.push(vec![Rational::zero(), &one - delta, delta.clone(), Rational::zero()]);
    probs.push(vec![Rational::zero(), Rational::zero(), Rational::zero(), one.clone()]);
    let n_rat = int(n as i64);
    Ok(Fixture {
        name: "monotone_omega".into(),
        instance: Instance::new(costs, rewards, probs)?,
        reference: vec![
            ("target_action".into(), int(n as i64 - 1)),
            ("ambiguous_lower".into(), &n_rat - &one - eps * (&n_rat - int(2)) + delta * gamma),
            ("single_upper".into(), &one + delta * gamma),
        ],
    })
}
