//! The ambiguity gap: how much an ambiguous contract can gain over the best
//! single contract, with generators for instances that exercise it.

mod fixtures;
mod generators;
mod probe;
mod unbounded;

use num_traits::Signed;
use thiserror::Error;

pub use fixtures::{gen_fixture, Fixture, FixtureSpec};
pub use generators::{gen_diagonal, gen_two_effort_gap, shape_restricted_payment, ActionRow};
pub use probe::{random_two_effort_instance, two_effort_upper_bound_probe, ProbeReport};
pub use unbounded::{
    delta_for_target, gen_unbounded_gap, target_ratio, Replication, UnboundedGap, UnboundedSpec,
};

use crate::ambiguous::{self, AmbiguousError};
use crate::lp::{self, LpError};
use crate::model::{dedupe_actions, Instance, ModelError};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GapError {
    #[error("invalid parameters: {0}")]
    Parameters(String),
    #[error("construction failed verification: {0}")]
    Construction(String),
    #[error("trial {trial} has first-best ratio {rho_hat}, above 2")]
    BoundViolated { trial: usize, rho_hat: Rational },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error(transparent)]
    Ambiguous(#[from] AmbiguousError),
}

/// A ratio whose denominator may vanish.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GapRatio {
    Finite(Rational),
    /// The best single contract earns nothing.
    Unbounded,
}

impl GapRatio {
    pub fn of(num: &Rational, den: &Rational) -> Self {
        if den.is_positive() {
            Self::Finite(num / den)
        } else {
            Self::Unbounded
        }
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Self::Finite(r) => Some(r),
            Self::Unbounded => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapReport {
    /// Best ambiguous over best single principal utility.
    pub rho: GapRatio,
    /// First-best welfare over best single principal utility.
    pub rho_hat: GapRatio,
    pub single_utility: Rational,
    pub single_action: usize,
    pub ambiguous_utility: Rational,
    pub ambiguous_action: usize,
    pub first_best_action: usize,
    pub first_best_welfare: Rational,
}

/// Compares the best single and best ambiguous contract. Duplicate rows are
/// removed first; reported actions index the input instance.
pub fn ambiguity_gap(inst: &Instance) -> Result<GapReport, GapError> {
    let (reduced, report) = dedupe_actions(inst)?;
    let single = lp::optimal_single(&reduced, false)?;
    let amb = ambiguous::solve_general(&reduced)?;
    let (first_best_action, first_best_welfare) = inst.first_best();
    Ok(GapReport {
        rho: GapRatio::of(&amb.principal_utility, &single.principal_utility),
        rho_hat: GapRatio::of(&first_best_welfare, &single.principal_utility),
        single_action: report.original(single.incentivized_action),
        single_utility: single.principal_utility,
        ambiguous_action: report.original(amb.incentivized_action),
        ambiguous_utility: amb.principal_utility,
        first_best_action,
        first_best_welfare,
    })
}
