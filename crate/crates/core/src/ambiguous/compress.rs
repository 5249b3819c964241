use super::general::likelihood_argmax;
use super::{check_action, check_tau, validate, AmbiguousError};
use crate::model::{expected_payment, AmbiguousContract, Contract, Instance, SolveResult};
use crate::rational::Rational;

fn precheck(inst: &Instance, tau: &AmbiguousContract, i: usize) -> Result<Rational, AmbiguousError> {
    check_action(inst, i)?;
    check_tau(inst, tau)?;
    if !validate(inst, tau, i).passed() {
        return Err(AmbiguousError::NotIncentiveCompatible(i));
    }
    Ok(expected_payment(inst, i, &tau.contracts()[0]))
}

/// Rewrites a consistent, incentive-compatible `τ` for `i` as at most
/// `min(m, n − 1)` SOP contracts with the same payment.
///
/// Each rival is deterred by an SOP on the outcome maximising `p_ij / p_i'j`,
/// which pays the rival no more than any member of `τ` does.
pub fn compress_to_sop(
    inst: &Instance,
    tau: &AmbiguousContract,
    i: usize,
) -> Result<SolveResult, AmbiguousError> {
    let payment = precheck(inst, tau, i)?;
    let m = inst.m();
    let mut contracts = Vec::new();
    for ip in (0..inst.n()).filter(|&ip| ip != i) {
        let (j, _) = likelihood_argmax(inst.row(i), inst.row(ip)).expect("non-empty support");
        contracts.push(Contract::sop(m, j, &payment / inst.p(i, j)));
    }
    if contracts.is_empty() {
        let h = inst.support_high(i);
        contracts.push(Contract::sop(m, h, &payment / inst.p(i, h)));
    }
    Ok(SolveResult::evaluate(inst, AmbiguousContract::new(contracts)?, i))
}

/// Rewrites a consistent, incentive-compatible set of monotone contracts for
/// `i` as at most `min(m, n − 1)` step contracts with the same payment.
pub fn compress_to_step(
    inst: &Instance,
    tau: &AmbiguousContract,
    i: usize,
) -> Result<SolveResult, AmbiguousError> {
    if !tau.all_monotone() {
        return Err(AmbiguousError::NotMonotone);
    }
    let payment = precheck(inst, tau, i)?;
    let m = inst.m();
    let tails = inst.tail_sums(i);
    let mut contracts = Vec::new();
    for ip in (0..inst.n()).filter(|&ip| ip != i) {
        let (k, _) = likelihood_argmax(&tails, &inst.tail_sums(ip)).expect("first tail is one");
        contracts.push(Contract::step(m, k, &payment / &tails[k]));
    }
    if contracts.is_empty() {
        contracts.push(Contract::step(m, 0, payment.clone()));
    }
    Ok(SolveResult::evaluate(inst, AmbiguousContract::new(contracts)?, i))
}
