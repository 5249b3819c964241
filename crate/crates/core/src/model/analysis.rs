use std::collections::HashMap;

use super::{AmbiguousContract, Contract, ExtendedRatio, Instance, ModelError};
use crate::rational::{dot, Rational};

pub fn expected_payment(inst: &Instance, i: usize, t: &Contract) -> Rational {
    dot(inst.row(i), t.payments())
}

pub fn agent_utility(inst: &Instance, i: usize, t: &Contract) -> Rational {
    expected_payment(inst, i, t) - inst.cost(i)
}

pub fn principal_utility(inst: &Instance, i: usize, t: &Contract) -> Rational {
    inst.expected_reward(i) - expected_payment(inst, i, t)
}

/// Agent's choice under a single contract: highest agent utility, then
/// highest principal utility, then lowest index.
pub fn best_response(inst: &Instance, t: &Contract) -> usize {
    let key = |i: usize| (agent_utility(inst, i, t), principal_utility(inst, i, t));
    let mut best = 0;
    let mut best_key = key(0);
    for i in 1..inst.n() {
        let k = key(i);
        if k > best_key {
            best = i;
            best_key = k;
        }
    }
    best
}

/// `min_{t ∈ τ} U_A(i, t)`.
pub fn worst_case_utility(inst: &Instance, i: usize, tau: &AmbiguousContract) -> Rational {
    tau.iter()
        .map(|t| agent_utility(inst, i, t))
        .min()
        .expect("ambiguous contracts are non-empty")
}

/// `max_{t ∈ τ} T_i(t)`.
pub fn largest_payment(inst: &Instance, i: usize, tau: &AmbiguousContract) -> Rational {
    tau.iter()
        .map(|t| expected_payment(inst, i, t))
        .max()
        .expect("ambiguous contracts are non-empty")
}

/// Max-min agent choice under an ambiguous contract. Ties prefer the larger
/// `R_i − max_t T_i(t)`, then the lower index.
pub fn maxmin_best_response(inst: &Instance, tau: &AmbiguousContract) -> usize {
    let key = |i: usize| {
        (worst_case_utility(inst, i, tau), inst.expected_reward(i) - largest_payment(inst, i, tau))
    };
    let mut best = 0;
    let mut best_key = key(0);
    for i in 1..inst.n() {
        let k = key(i);
        if k > best_key {
            best = i;
            best_key = k;
        }
    }
    best
}

/// Every member of `τ` pays action `i` the same expected amount.
pub fn is_consistent(inst: &Instance, tau: &AmbiguousContract, i: usize) -> bool {
    let mut payments = tau.iter().map(|t| expected_payment(inst, i, t));
    let first = payments.next().expect("ambiguous contracts are non-empty");
    payments.all(|x| x == first)
}

/// Outcome of removing duplicate rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DedupeReport {
    /// Sorted indices (in the input instance) of the actions that survive.
    pub kept: Vec<usize>,
    /// `(removed, kept_instead)` pairs, indices in the input instance.
    pub removed: Vec<(usize, usize)>,
}

impl DedupeReport {
    /// Input-instance index of action `k` of the reduced instance.
    pub fn original(&self, k: usize) -> usize {
        self.kept[k]
    }
}

/// Drops every action whose row equals that of a cheaper (or, on equal cost,
/// lower-indexed) action.
pub fn dedupe_actions(inst: &Instance) -> Result<(Instance, DedupeReport), ModelError> {
    let mut first_seen: HashMap<&[Rational], usize> = HashMap::new();
    let mut kept = Vec::new();
    let mut removed = Vec::new();
    for i in 0..inst.n() {
        match first_seen.get(inst.row(i)) {
            Some(&a) => removed.push((i, a)),
            None => {
                first_seen.insert(inst.row(i), i);
                kept.push(i);
            }
        }
    }
    let reduced = inst.restrict_actions(&kept)?;
    Ok((reduced, DedupeReport { kept, removed }))
}

/// A violation of the monotone likelihood ratio property: `c_i > c_{i'}`,
/// `j < j'`, yet `p_ij / p_i'j > p_ij' / p_i'j'`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MlrpWitness {
    pub i: usize,
    pub i_prime: usize,
    pub j: usize,
    pub j_prime: usize,
}

/// `Ok(())` if the instance satisfies MLRP, otherwise the first violation in
/// lexicographic order of `(i, i', j, j')`.
pub fn is_mlrp(inst: &Instance) -> Result<(), MlrpWitness> {
    for i in 0..inst.n() {
        for ip in 0..inst.n() {
            if inst.cost(i) <= inst.cost(ip) {
                continue;
            }
            let ratios: Vec<Option<ExtendedRatio>> = (0..inst.m())
                .map(|j| ExtendedRatio::of(inst.p(i, j), inst.p(ip, j)))
                .collect();
            for j in 0..inst.m() {
                let Some(lo) = &ratios[j] else { continue };
                for (jp, hi) in ratios.iter().enumerate().skip(j + 1) {
                    if matches!(hi, Some(hi) if hi < lo) {
                        return Err(MlrpWitness { i, i_prime: ip, j, j_prime: jp });
                    }
                }
            }
        }
    }
    Ok(())
}
