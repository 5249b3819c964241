use rayon::prelude::*;

use super::{
    best_of, certified, check_action, require_distinct_rows, ActionSolution, AmbiguousError,
    WaterLevel,
};
use crate::model::{AmbiguousContract, Contract, ExtendedRatio, Instance, SolveResult};
use crate::rational::Rational;

/// Largest `p_ij / p_i'j` over the support of `p_i`; ties go to the larger `j`.
pub(super) fn likelihood_argmax(a: &[Rational], b: &[Rational]) -> Option<(usize, ExtendedRatio)> {
    let mut best: Option<(usize, ExtendedRatio)> = None;
    for (j, (x, y)) in a.iter().zip(b).enumerate() {
        if *x <= Rational::from_integer(0.into()) {
            continue;
        }
        let r = ExtendedRatio::of(x, y).expect("numerator is positive");
        if best.as_ref().is_none_or(|(_, br)| r >= *br) {
            best = Some((j, r));
        }
    }
    best
}

/// Water level needed to deter `i'` with a scaled indicator on a set where
/// `i` has mass `a` and `i'` has mass `b`, given `ratio = a / b`.
pub(super) fn deterrence_level(
    ratio: &ExtendedRatio,
    a: &Rational,
    b: &Rational,
    cost_gap: Rational,
) -> Rational {
    match ratio {
        ExtendedRatio::Infinite => cost_gap,
        ExtendedRatio::Finite(_) => a * cost_gap / (a - b),
    }
}

/// Cheapest consistent SOP ambiguous contract implementing action `i`.
pub fn solve_general_for_action(inst: &Instance, i: usize) -> Result<ActionSolution, AmbiguousError> {
    check_action(inst, i)?;
    require_distinct_rows(inst)?;
    let mut theta = inst.cost(i).clone();
    let mut binding_action = None;
    let mut outcomes: Vec<usize> = Vec::new();
    for ip in (0..inst.n()).filter(|&ip| ip != i) {
        let (j, ratio) = likelihood_argmax(inst.row(i), inst.row(ip)).expect("non-empty support");
        let level =
            deterrence_level(&ratio, inst.p(i, j), inst.p(ip, j), inst.cost(i) - inst.cost(ip));
        if level > theta {
            theta = level;
            binding_action = Some(ip);
        }
        if !outcomes.contains(&j) {
            outcomes.push(j);
        }
    }
    if outcomes.is_empty() {
        outcomes.push(inst.support_high(i));
    }
    let contracts = outcomes
        .iter()
        .map(|&j| Contract::sop(inst.m(), j, &theta / inst.p(i, j)))
        .collect();
    let result = certified(inst, AmbiguousContract::new(contracts)?, i)?;
    Ok(ActionSolution { result, water_level: WaterLevel { theta, binding_action, outcomes } })
}

/// Per-action optima, in action order.
pub fn solve_general_all(inst: &Instance) -> Result<Vec<ActionSolution>, AmbiguousError> {
    require_distinct_rows(inst)?;
    (0..inst.n()).into_par_iter().map(|i| solve_general_for_action(inst, i)).collect()
}

/// Best ambiguous contract over all actions.
pub fn solve_general(inst: &Instance) -> Result<SolveResult, AmbiguousError> {
    let best = best_of(solve_general_all(inst)?).expect("at least one action");
    Ok(best.result)
}
