//! Exact linear programming and the single-contract payment problem.

mod simplex;

use num_traits::Zero;
use rayon::prelude::*;
use thiserror::Error;

pub use simplex::{
    simplex_solve, solve_covering, CoveringSolution, LinearConstraint, LpProblem, LpSolution,
    Relation,
};

use crate::model::{AmbiguousContract, Contract, Instance, ModelError, SolveResult};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LpError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("covering LPs need a non-negative objective")]
    NegativeCovering,
    #[error("exact verification failed: {0}")]
    Verification(String),
    #[error("action {action} does not have the minimum cost")]
    NotMinimumCost { action: usize },
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Constraint data of the minimum-payment LP for one action: minimise
/// `objective · t` subject to `rows · t ≥ rhs`, `t ≥ 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PaymentLp {
    pub objective: Vec<Rational>,
    pub rows: Vec<Vec<Rational>>,
    pub rhs: Vec<Rational>,
}

impl PaymentLp {
    /// Incentive constraints against every other action, individual
    /// rationality, and `t_j ≤ t_{j+1}` when `monotone` is set.
    pub fn build(inst: &Instance, i: usize, monotone: bool) -> Self {
        let m = inst.m();
        let mut rows = Vec::with_capacity(inst.n() + m);
        let mut rhs = Vec::with_capacity(inst.n() + m);
        for ip in (0..inst.n()).filter(|&ip| ip != i) {
            rows.push((0..m).map(|j| inst.p(i, j) - inst.p(ip, j)).collect());
            rhs.push(inst.cost(i) - inst.cost(ip));
        }
        rows.push(inst.row(i).to_vec());
        rhs.push(inst.cost(i).clone());
        if monotone {
            for j in 0..m.saturating_sub(1) {
                let mut row = vec![Rational::zero(); m];
                row[j] = Rational::from_integer((-1).into());
                row[j + 1] = Rational::from_integer(1.into());
                rows.push(row);
                rhs.push(Rational::zero());
            }
        }
        Self { objective: inst.row(i).to_vec(), rows, rhs }
    }

    pub fn to_problem(&self) -> LpProblem {
        LpProblem::new(
            self.objective.clone(),
            self.rows
                .iter()
                .zip(&self.rhs)
                .map(|(row, b)| LinearConstraint::new(row.clone(), Relation::Ge, b.clone()))
                .collect(),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinPayment {
    pub payment: Rational,
    pub contract: Contract,
}

/// Cheapest single contract implementing action `i`, or `None` when no
/// contract does.
pub fn min_payment(inst: &Instance, i: usize, monotone: bool) -> Result<Option<MinPayment>, LpError> {
    if i >= inst.n() {
        return Err(ModelError::ActionOutOfRange(i).into());
    }
    let lp = PaymentLp::build(inst, i, monotone);
    let Some(sol) = solve_covering(&lp.objective, &lp.rows, &lp.rhs)? else {
        return Ok(None);
    };
    Ok(Some(MinPayment { payment: sol.value, contract: Contract::new(sol.primal)? }))
}

pub fn implementable(inst: &Instance, i: usize) -> Result<bool, LpError> {
    Ok(min_payment(inst, i, false)?.is_some())
}

/// Constant contract paying `c_i` everywhere, which implements any
/// minimum-cost action at cost.
pub fn at_cost_contract(inst: &Instance, i: usize) -> Result<Contract, LpError> {
    if i >= inst.n() {
        return Err(ModelError::ActionOutOfRange(i).into());
    }
    if inst.cost(i) != inst.cost(0) {
        return Err(LpError::NotMinimumCost { action: i });
    }
    Ok(Contract::new(vec![inst.cost(i).clone(); inst.m()])?)
}

/// Per-action minimum payments, in action order.
pub fn min_payments(inst: &Instance, monotone: bool) -> Result<Vec<Option<MinPayment>>, LpError> {
    (0..inst.n()).into_par_iter().map(|i| min_payment(inst, i, monotone)).collect()
}

/// Best single contract for the principal: highest utility, then smaller
/// payment, then smaller action index.
pub fn optimal_single(inst: &Instance, monotone: bool) -> Result<SolveResult, LpError> {
    let payments = min_payments(inst, monotone)?;
    let mut best: Option<(usize, Rational, &MinPayment)> = None;
    for (i, mp) in payments.iter().enumerate() {
        let Some(mp) = mp else { continue };
        let up = inst.expected_reward(i) - &mp.payment;
        let better = match &best {
            None => true,
            Some((_, best_up, best_mp)) => {
                up > *best_up || (up == *best_up && mp.payment < best_mp.payment)
            }
        };
        if better {
            best = Some((i, up, mp));
        }
    }
    let (i, _, mp) = best.ok_or_else(|| {
        LpError::Verification("no action is implementable, yet the cheapest always is".into())
    })?;
    Ok(SolveResult::evaluate(inst, AmbiguousContract::single(mp.contract.clone()), i))
}
