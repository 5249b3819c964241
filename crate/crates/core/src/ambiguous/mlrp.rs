use num_traits::Zero;

use super::{
    best_of, certified, check_action, require_distinct_rows, ActionSolution, AmbiguousError,
    WaterLevel,
};
use crate::model::{is_mlrp, AmbiguousContract, Contract, Instance, SolveResult};
use crate::rational::Rational;

/// Lowest (`low`) and highest (`high`) support outcome of every action.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Supports {
    pub low: Vec<usize>,
    pub high: Vec<usize>,
}

fn precheck(inst: &Instance) -> Result<(), AmbiguousError> {
    is_mlrp(inst).map_err(AmbiguousError::NotMlrp)?;
    if let Some(i) = (1..inst.n()).find(|&i| inst.cost(i) == inst.cost(i - 1)) {
        return Err(AmbiguousError::EqualCosts(i - 1, i));
    }
    Ok(())
}

fn scan(inst: &Instance) -> Supports {
    let (n, m) = (inst.n(), inst.m());
    let mut low = vec![0; n];
    let mut cur = 0;
    for (i, l) in low.iter_mut().enumerate() {
        while inst.p(i, cur).is_zero() {
            cur += 1;
        }
        *l = cur;
    }
    let mut high = vec![0; n];
    let mut cur = m - 1;
    for i in (0..n).rev() {
        while inst.p(i, cur).is_zero() {
            cur -= 1;
        }
        high[i] = cur;
    }
    Supports { low, high }
}

/// Support endpoints in `O(n + m)` after checking MLRP; both endpoints are
/// non-decreasing in the action index.
pub fn support_scan(inst: &Instance) -> Result<Supports, AmbiguousError> {
    precheck(inst)?;
    Ok(scan(inst))
}

fn mlrp_level(inst: &Instance, i: usize, h: usize) -> Result<(Rational, Option<usize>), AmbiguousError> {
    let mut theta = inst.cost(i).clone();
    let mut binding = None;
    for ip in 0..i {
        let gap = inst.p(i, h) - inst.p(ip, h);
        if gap <= Rational::zero() {
            return Err(AmbiguousError::Verification(format!(
                "top-outcome mass of {i} does not exceed that of {ip}"
            )));
        }
        let level = inst.p(i, h) * (inst.cost(i) - inst.cost(ip)) / gap;
        if level > theta {
            theta = level;
            binding = Some(ip);
        }
    }
    Ok((theta, binding))
}

fn for_action(
    inst: &Instance,
    supports: &Supports,
    i: usize,
    monotone: bool,
) -> Result<ActionSolution, AmbiguousError> {
    let (l, h) = (supports.low[i], supports.high[i]);
    let (theta, binding_action) = mlrp_level(inst, i, h)?;
    let m = inst.m();
    let contracts = if monotone {
        vec![Contract::step(m, l, theta.clone()), Contract::step(m, h, &theta / inst.p(i, h))]
    } else {
        vec![
            Contract::sop(m, l, &theta / inst.p(i, l)),
            Contract::sop(m, h, &theta / inst.p(i, h)),
        ]
    };
    let result = certified(inst, AmbiguousContract::new(contracts)?, i)?;
    let mut outcomes = vec![l];
    if h != l {
        outcomes.push(h);
    }
    Ok(ActionSolution { result, water_level: WaterLevel { theta, binding_action, outcomes } })
}

fn prepared(inst: &Instance, i: Option<usize>) -> Result<Supports, AmbiguousError> {
    if let Some(i) = i {
        check_action(inst, i)?;
    }
    require_distinct_rows(inst)?;
    support_scan(inst)
}

/// Two-SOP optimum for action `i` on an MLRP instance.
pub fn solve_mlrp_for_action(inst: &Instance, i: usize) -> Result<ActionSolution, AmbiguousError> {
    let supports = prepared(inst, Some(i))?;
    for_action(inst, &supports, i, false)
}

/// Two-step optimum for action `i` on an MLRP instance.
pub fn solve_mlrp_monotone_for_action(
    inst: &Instance,
    i: usize,
) -> Result<ActionSolution, AmbiguousError> {
    let supports = prepared(inst, Some(i))?;
    for_action(inst, &supports, i, true)
}

fn solve_all(inst: &Instance, monotone: bool) -> Result<SolveResult, AmbiguousError> {
    let supports = prepared(inst, None)?;
    let solutions = (0..inst.n())
        .map(|i| for_action(inst, &supports, i, monotone))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(best_of(solutions).expect("at least one action").result)
}

pub fn solve_mlrp(inst: &Instance) -> Result<SolveResult, AmbiguousError> {
    solve_all(inst, false)
}

pub fn solve_mlrp_monotone(inst: &Instance) -> Result<SolveResult, AmbiguousError> {
    solve_all(inst, true)
}
