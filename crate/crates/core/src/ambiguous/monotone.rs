use rayon::prelude::*;

use super::general::{deterrence_level, likelihood_argmax};
use super::{best_of, certified, check_action, ActionSolution, AmbiguousError, WaterLevel};
use crate::model::{AmbiguousContract, Contract, Instance, SolveResult};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MonotoneOutcome {
    Solved(ActionSolution),
    /// A cheaper action's tail sums dominate those of the target.
    NotImplementable { dominated_by: usize },
}

impl MonotoneOutcome {
    pub fn solution(&self) -> Option<&ActionSolution> {
        match self {
            Self::Solved(s) => Some(s),
            Self::NotImplementable { .. } => None,
        }
    }
}

/// Cheapest consistent ambiguous contract of step contracts implementing `i`.
pub fn solve_monotone_for_action(inst: &Instance, i: usize) -> Result<MonotoneOutcome, AmbiguousError> {
    check_action(inst, i)?;
    let tails = inst.tail_sums(i);
    let mut theta = inst.cost(i).clone();
    let mut binding_action = None;
    let mut outcomes = vec![inst.support_low(i)];
    for ip in (0..inst.n()).filter(|&ip| inst.cost(ip) < inst.cost(i)) {
        let other = inst.tail_sums(ip);
        if tails.iter().zip(&other).all(|(a, b)| a <= b) {
            return Ok(MonotoneOutcome::NotImplementable { dominated_by: ip });
        }
        let (k, ratio) = likelihood_argmax(&tails, &other).expect("first tail is one");
        let level = deterrence_level(&ratio, &tails[k], &other[k], inst.cost(i) - inst.cost(ip));
        if level > theta {
            theta = level;
            binding_action = Some(ip);
        }
        if !outcomes.contains(&k) {
            outcomes.push(k);
        }
    }
    let contracts =
        outcomes.iter().map(|&k| Contract::step(inst.m(), k, &theta / &tails[k])).collect();
    let result = certified(inst, AmbiguousContract::new(contracts)?, i)?;
    Ok(MonotoneOutcome::Solved(ActionSolution {
        result,
        water_level: WaterLevel { theta, binding_action, outcomes },
    }))
}

pub fn solve_monotone_all(inst: &Instance) -> Result<Vec<MonotoneOutcome>, AmbiguousError> {
    (0..inst.n()).into_par_iter().map(|i| solve_monotone_for_action(inst, i)).collect()
}

/// Best monotone ambiguous contract over all monotone-implementable actions.
pub fn solve_monotone(inst: &Instance) -> Result<SolveResult, AmbiguousError> {
    let solved = solve_monotone_all(inst)?
        .into_iter()
        .filter_map(|o| match o {
            MonotoneOutcome::Solved(s) => Some(s),
            MonotoneOutcome::NotImplementable { .. } => None,
        })
        .collect();
    best_of(solved)
        .map(|s| s.result)
        .ok_or_else(|| AmbiguousError::Verification("cheapest action must be implementable".into()))
}
