//! Exact solvers for hidden-action principal-agent problems in which the
//! principal may commit to an ambiguous set of contracts.
//!
//! All arithmetic is carried out over arbitrary-precision rationals, so every
//! reported payment and utility is exact.

pub mod ambiguous;
pub mod gap;
pub mod lp;
pub mod manipulability;
pub mod model;
pub mod rational;

pub use model::{
    AmbiguousContract, Certificate, Contract, ExtendedRatio, Instance, ModelError, SolveResult,
};
pub use rational::Rational;
