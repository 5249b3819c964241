use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{GapError, GapRatio};
use crate::lp;
use crate::model::{dedupe_actions, Instance};
use crate::rational::{int, rat, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbeReport {
    pub trials: usize,
    /// Largest first-best ratio seen.
    pub max_rho_hat: Rational,
    pub worst_trial: usize,
    /// Trials where neither the best single contract nor first best earns
    /// anything.
    pub degenerate: usize,
}

/// Random instance with costs in `{0, c_h}`, at least one of each, up to
/// six actions and six outcomes, and small-denominator entries.
pub fn random_two_effort_instance(rng: &mut impl Rng) -> Instance {
    loop {
        let n = rng.gen_range(2..=6);
        let m = rng.gen_range(2..=6);
        let mut rewards: Vec<Rational> = (0..m).map(|_| int(rng.gen_range(0..=12))).collect();
        rewards.sort();
        let probs: Vec<Vec<Rational>> = (0..n)
            .map(|_| {
                let mut w: Vec<i64> = (0..m).map(|_| rng.gen_range(0..=4)).collect();
                if w.iter().all(|&x| x == 0) {
                    w[rng.gen_range(0..m)] = 1;
                }
                let total: i64 = w.iter().sum();
                w.iter().map(|&x| rat(x, total)).collect()
            })
            .collect();
        let high = rat(rng.gen_range(1..=24), 4);
        let mut costs = vec![int(0), high.clone()];
        costs.extend((2..n).map(|_| if rng.gen_bool(0.5) { high.clone() } else { int(0) }));
        if let Ok(inst) = Instance::new(costs, rewards, probs) {
            return inst;
        }
    }
}

/// Samples `trials` two-effort instances and checks that first-best welfare
/// never exceeds twice the best single-contract utility.
pub fn two_effort_upper_bound_probe(trials: usize, seed: u64) -> Result<ProbeReport, GapError> {
    let ratios: Vec<(usize, Option<Rational>)> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(trial as u64);
            let inst = random_two_effort_instance(&mut rng);
            let (reduced, _) = dedupe_actions(&inst)?;
            let single = lp::optimal_single(&reduced, false)?.principal_utility;
            let (_, welfare) = inst.first_best();
            let ratio = match GapRatio::of(&welfare, &single) {
                GapRatio::Finite(r) => Some(r),
                GapRatio::Unbounded if welfare <= single => None,
                GapRatio::Unbounded => {
                    return Err(GapError::BoundViolated { trial, rho_hat: welfare });
                }
            };
            Ok((trial, ratio))
        })
        .collect::<Result<_, GapError>>()?;

    let two = int(2);
    let mut report =
        ProbeReport { trials, max_rho_hat: int(1), worst_trial: 0, degenerate: 0 };
    for (trial, ratio) in ratios {
        match ratio {
            None => report.degenerate += 1,
            Some(r) => {
                if r > two {
                    return Err(GapError::BoundViolated { trial, rho_hat: r });
                }
                if r > report.max_rho_hat {
                    report.max_rho_hat = r;
                    report.worst_trial = trial;
                }
            }
        }
    }
    Ok(report)
}
