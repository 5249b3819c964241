use num_traits::{One, Signed, Zero};

use super::GapError;
use crate::lp::{simplex_solve, LinearConstraint, LpSolution, PaymentLp, Relation};
use crate::model::Instance;
use crate::rational::{int, Rational};

/// One action: its cost and outcome distribution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionRow {
    pub cost: Rational,
    pub probs: Vec<Rational>,
}

/// Diagonal pseudo-actions: the point mass on the first outcome, and for
/// each `j ≥ 2` a row mixing outcome `j` (probability `(W + c) / r_j`) with
/// the first outcome. Every row costs `c`; all but the first have welfare `W`.
pub fn gen_diagonal(
    rewards: &[Rational],
    welfare: &Rational,
    cost: &Rational,
) -> Result<Vec<ActionRow>, GapError> {
    let m = rewards.len();
    if m < 2 || !rewards[0].is_zero() {
        return Err(GapError::Parameters("need at least two rewards with r_1 = 0".into()));
    }
    if cost.is_negative() || (welfare + cost).is_negative() {
        return Err(GapError::Parameters("W + c and c must be non-negative".into()));
    }
    let mut rows = vec![ActionRow { cost: cost.clone(), probs: unit(m, 0) }];
    for (j, r) in rewards.iter().enumerate().skip(1) {
        if !r.is_positive() {
            return Err(GapError::Parameters(format!("reward r_{} must be positive", j + 1)));
        }
        let pj = (welfare + cost) / r;
        if pj > Rational::one() {
            return Err(GapError::Parameters(format!("(W + c) / r_{} exceeds 1", j + 1)));
        }
        let mut probs = vec![Rational::zero(); m];
        probs[0] = Rational::one() - &pj;
        probs[j] = pj;
        rows.push(ActionRow { cost: cost.clone(), probs });
    }
    Ok(rows)
}

pub(super) fn unit(m: usize, j: usize) -> Vec<Rational> {
    (0..m).map(|k| int(i64::from(k == j))).collect()
}

/// Two-effort instance with `r = (0, δ, 1 + δ)`: diagonal rows of welfare `ε`
/// at cost zero, plus a costly action `(0, δ, 1 − δ)` with cost `(1 − ε)²`.
pub fn gen_two_effort_gap(eps: &Rational, delta: &Rational) -> Result<Instance, GapError> {
    let one = Rational::one();
    if !(eps.is_positive() && eps < delta && *delta < one) {
        return Err(GapError::Parameters("need 1 > δ > ε > 0".into()));
    }
    let rewards = vec![Rational::zero(), delta.clone(), &one + delta];
    let mut rows = gen_diagonal(&rewards, eps, &Rational::zero())?;
    let slack = &one - eps;
    rows.push(ActionRow {
        cost: &slack * &slack,
        probs: vec![Rational::zero(), delta.clone(), &one - delta],
    });
    Ok(Instance::new(
        rows.iter().map(|r| r.cost.clone()).collect(),
        rewards,
        rows.into_iter().map(|r| r.probs).collect(),
    )?)
}

/// Minimum payment for `i` when contracts are restricted to
/// `t_1 = 0`, `t_j = (r_j / r_2) t_2`; `None` if infeasible.
pub fn shape_restricted_payment(inst: &Instance, i: usize) -> Result<Option<Rational>, GapError> {
    if inst.m() < 2 || !inst.rewards()[0].is_zero() || !inst.rewards()[1].is_positive() {
        return Err(GapError::Parameters("need r_1 = 0 < r_2".into()));
    }
    let m = inst.m();
    let mut problem = PaymentLp::build(inst, i, false).to_problem();
    let mut first = vec![Rational::zero(); m];
    first[0] = Rational::one();
    problem.constraints.push(LinearConstraint::new(first, Relation::Eq, Rational::zero()));
    for j in 2..m {
        let mut row = vec![Rational::zero(); m];
        row[j] = Rational::one();
        row[1] = -(&inst.rewards()[j] / &inst.rewards()[1]);
        problem.constraints.push(LinearConstraint::new(row, Relation::Eq, Rational::zero()));
    }
    Ok(match simplex_solve(&problem)? {
        LpSolution::Optimal { value, .. } => Some(value),
        LpSolution::Infeasible => None,
        LpSolution::Unbounded => {
            return Err(GapError::Construction("payment LP cannot be unbounded".into()))
        }
    })
}
