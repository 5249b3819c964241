//! Optimal ambiguous contracts.
//!
//! General instances are solved with single-outcome-payment (SOP) contracts,
//! monotone ones with step contracts. Under MLRP two contracts suffice and
//! the supports can be scanned in linear time.

mod compress;
mod general;
mod mlrp;
mod monotone;

use thiserror::Error;

pub use compress::{compress_to_sop, compress_to_step};
pub use general::{solve_general, solve_general_all, solve_general_for_action};
pub use mlrp::{
    solve_mlrp, solve_mlrp_for_action, solve_mlrp_monotone, solve_mlrp_monotone_for_action,
    support_scan, Supports,
};
pub use monotone::{solve_monotone, solve_monotone_all, solve_monotone_for_action, MonotoneOutcome};

use crate::model::{
    is_consistent, maxmin_best_response, worst_case_utility, AmbiguousContract, Certificate,
    CheckItem, Condition, Instance, MlrpWitness, ModelError, SolveResult,
};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AmbiguousError {
    #[error("actions {0} and {1} have identical rows; deduplicate first")]
    DuplicateRows(usize, usize),
    #[error("instance violates MLRP at i={} i'={} j={} j'={}", .0.i, .0.i_prime, .0.j, .0.j_prime)]
    NotMlrp(MlrpWitness),
    #[error("actions {0} and {1} share a cost, which the MLRP fast path does not support")]
    EqualCosts(usize, usize),
    #[error("contract set does not incentivise action {0}")]
    NotIncentiveCompatible(usize),
    #[error("contract set contains a non-monotone contract")]
    NotMonotone,
    #[error("contract set has {found} outcomes, instance has {expected}")]
    Dimension { expected: usize, found: usize },
    #[error("exact verification failed: {0}")]
    Verification(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// The water level `θ` reached for one action and how it was reached.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WaterLevel {
    pub theta: Rational,
    /// Action whose constraint lifted `θ` strictly above the cost, if any.
    pub binding_action: Option<usize>,
    /// Outcomes (SOP positions or step thresholds) used by the contracts.
    pub outcomes: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionSolution {
    pub result: SolveResult,
    pub water_level: WaterLevel,
}

/// Itemised check that `τ` is consistent for `i`, individually rational and
/// incentive compatible against every other action.
pub fn validate(inst: &Instance, tau: &AmbiguousContract, i: usize) -> Certificate {
    let target = worst_case_utility(inst, i, tau);
    let mut items = vec![
        CheckItem { condition: Condition::Consistency, passed: is_consistent(inst, tau, i) },
        CheckItem {
            condition: Condition::IndividualRationality,
            passed: target >= Rational::from_integer(0.into()),
        },
    ];
    for ip in (0..inst.n()).filter(|&ip| ip != i) {
        items.push(CheckItem {
            condition: Condition::IncentiveCompatibility { against: ip },
            passed: target >= worst_case_utility(inst, ip, tau),
        });
    }
    let chosen = maxmin_best_response(inst, tau);
    items.push(CheckItem { condition: Condition::TieBreak { chosen }, passed: chosen == i });
    Certificate { action: i, items }
}

fn check_action(inst: &Instance, i: usize) -> Result<(), AmbiguousError> {
    if i >= inst.n() {
        return Err(ModelError::ActionOutOfRange(i).into());
    }
    Ok(())
}

fn require_distinct_rows(inst: &Instance) -> Result<(), AmbiguousError> {
    match inst.duplicate_rows() {
        Some((a, b)) => Err(AmbiguousError::DuplicateRows(a, b)),
        None => Ok(()),
    }
}

fn check_tau(inst: &Instance, tau: &AmbiguousContract) -> Result<(), AmbiguousError> {
    if tau.m() != inst.m() {
        return Err(AmbiguousError::Dimension { expected: inst.m(), found: tau.m() });
    }
    Ok(())
}

/// Highest principal utility; ties go to the smaller index.
fn best_of(solutions: Vec<ActionSolution>) -> Option<ActionSolution> {
    let mut best: Option<ActionSolution> = None;
    for s in solutions {
        let better = match &best {
            None => true,
            Some(b) => s.result.principal_utility > b.result.principal_utility,
        };
        if better {
            best = Some(s);
        }
    }
    best
}

fn certified(inst: &Instance, tau: AmbiguousContract, i: usize) -> Result<SolveResult, AmbiguousError> {
    let result = SolveResult::evaluate(inst, tau, i);
    if !result.certificate.passed() {
        return Err(AmbiguousError::Verification(format!(
            "constructed contract set fails validation for action {i}"
        )));
    }
    Ok(result)
}
