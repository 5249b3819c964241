//! Instances, contracts and the basic utility calculus.

mod analysis;
mod contract;
mod instance;

use thiserror::Error;

pub use analysis::{
    agent_utility, best_response, dedupe_actions, expected_payment, is_consistent, is_mlrp,
    largest_payment, maxmin_best_response, principal_utility, worst_case_utility, DedupeReport,
    MlrpWitness,
};
pub use contract::{AmbiguousContract, Contract, ExtendedRatio};
pub use instance::{Instance, OriginalLayout};

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("instance has no actions")]
    NoActions,
    #[error("instance has no outcomes")]
    NoOutcomes,
    #[error("expected {expected} probability rows, found {found}")]
    RowCount { expected: usize, found: usize },
    #[error("row {row} has {found} entries, expected {expected}")]
    Ragged { row: usize, expected: usize, found: usize },
    #[error("probability p[{row}][{col}] = {value} is outside [0, 1]")]
    Probability { row: usize, col: usize, value: Rational },
    #[error("row {row} sums to {sum}, not 1")]
    RowSum { row: usize, sum: Rational },
    #[error("action {action} has a negative cost")]
    NegativeCost { action: usize },
    #[error("outcome {outcome} has a negative reward")]
    NegativeReward { outcome: usize },
    #[error("contract pays a negative amount on outcome {outcome}")]
    NegativePayment { outcome: usize },
    #[error("expected {expected} labels, found {found}")]
    LabelCount { expected: usize, found: usize },
    #[error("an ambiguous contract needs at least one member")]
    EmptyAmbiguousContract,
    #[error("action index {0} is out of range")]
    ActionOutOfRange(usize),
}

/// One line of a validation certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Condition {
    /// Every member pays the target action the same amount.
    Consistency,
    /// The target's worst-case utility is non-negative.
    IndividualRationality,
    /// The target's worst-case utility is at least that of `against`.
    IncentiveCompatibility { against: usize },
    /// The deterministic max-min tie-break selects `chosen`.
    TieBreak { chosen: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckItem {
    pub condition: Condition,
    pub passed: bool,
}

/// Itemised check that an ambiguous contract incentivises an action.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub action: usize,
    pub items: Vec<CheckItem>,
}

impl Certificate {
    /// Consistency, individual rationality and every incentive constraint hold.
    ///
    /// The tie-break line is informational: an incentive-compatible target
    /// may tie with another action that the fixed tie key happens to prefer.
    pub fn passed(&self) -> bool {
        self.items
            .iter()
            .filter(|item| !matches!(item.condition, Condition::TieBreak { .. }))
            .all(|item| item.passed)
    }

    pub fn tie_break_confirmed(&self) -> bool {
        self.items
            .iter()
            .filter(|item| matches!(item.condition, Condition::TieBreak { .. }))
            .all(|item| item.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckItem> {
        self.items.iter().filter(|item| !item.passed)
    }
}

/// A contract (or ambiguous contract) together with what it achieves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult {
    pub incentivized_action: usize,
    pub expected_payment: Rational,
    pub agent_utility: Rational,
    pub principal_utility: Rational,
    pub contract_payments: Vec<Rational>,
    pub contracts: AmbiguousContract,
    pub certificate: Certificate,
}

impl SolveResult {
    /// Evaluates `τ` for target `i`; the expected payment is the worst case
    /// for the principal, which equals every member's payment when `τ` is
    /// consistent.
    pub fn evaluate(inst: &Instance, contracts: AmbiguousContract, i: usize) -> Self {
        let contract_payments: Vec<Rational> =
            contracts.iter().map(|t| expected_payment(inst, i, t)).collect();
        let payment = contract_payments.iter().max().cloned().expect("non-empty");
        let certificate = crate::ambiguous::validate(inst, &contracts, i);
        Self {
            incentivized_action: i,
            agent_utility: worst_case_utility(inst, i, &contracts),
            principal_utility: inst.expected_reward(i) - &payment,
            expected_payment: payment,
            contract_payments,
            contracts,
            certificate,
        }
    }
}
