//! Acceptance checks. Runs as a plain binary under `cargo test` and prints
//! one PASS/FAIL line per criterion.

mod support;

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use ambicon::ambiguous::{
    compress_to_sop, compress_to_step, solve_general, solve_general_for_action, solve_mlrp,
    solve_monotone, solve_monotone_for_action, validate, MonotoneOutcome,
};
use ambicon::gap::{
    ambiguity_gap, delta_for_target, gen_fixture, gen_two_effort_gap, gen_unbounded_gap,
    two_effort_upper_bound_probe, FixtureSpec, GapRatio, UnboundedSpec,
};
use ambicon::lp::{implementable, min_payment, optimal_single};
use ambicon::manipulability::{witness_from_grid, ContractCurve};
use ambicon::model::{dedupe_actions, expected_payment, is_mlrp};
use ambicon::rational::{int, parse_rational, rat, Rational};
use ambicon::{AmbiguousContract, Contract, Instance};
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<(), String>;
type Criterion = (&'static str, fn() -> Check, Duration);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn dec(s: &str) -> Rational {
    parse_rational(s).unwrap()
}

fn ac1_example1() -> Check {
    let inst = gen_fixture(&FixtureSpec::Example1).unwrap().instance;
    let single = optimal_single(&inst, false).map_err(|e| e.to_string())?;
    ensure(single.principal_utility == int(2), || format!("single U_P {}", single.principal_utility))?;
    let amb = solve_general(&inst).map_err(|e| e.to_string())?;
    let expected = AmbiguousContract::new(vec![
        Contract::new(vec![int(0), int(2), int(0)]).unwrap(),
        Contract::new(vec![int(0), int(0), int(4)]).unwrap(),
    ])
    .unwrap();
    ensure(amb.principal_utility == int(3), || format!("ambiguous U_P {}", amb.principal_utility))?;
    ensure(amb.expected_payment == int(1), || format!("payment {}", amb.expected_payment))?;
    ensure(amb.contracts == expected, || format!("contracts {:?}", amb.contracts))?;
    ensure(amb.incentivized_action == 2, || "wrong action".into())?;
    let gap = ambiguity_gap(&inst).map_err(|e| e.to_string())?;
    ensure(gap.rho == GapRatio::Finite(rat(3, 2)), || format!("rho {:?}", gap.rho))
}

fn ac2_b4() -> Check {
    let inst = gen_fixture(&FixtureSpec::MlrpB4).unwrap().instance;
    let single = optimal_single(&inst, false).map_err(|e| e.to_string())?;
    ensure(single.principal_utility == dec("2.987"), || format!("single {}", single.principal_utility))?;
    ensure(single.incentivized_action == 3, || "single should pick action 4".into())?;
    ensure(single.expected_payment == dec("2.2"), || "single should pay the cost 2.2".into())?;
    let amb = solve_general(&inst).map_err(|e| e.to_string())?;
    let expected = AmbiguousContract::new(vec![
        Contract::sop(6, 2, int(5)),
        Contract::sop(6, 5, int(20)),
    ])
    .unwrap();
    ensure(amb.principal_utility == dec("3.095"), || format!("ambiguous {}", amb.principal_utility))?;
    ensure(amb.expected_payment == int(2), || "ambiguous payment".into())?;
    ensure(amb.contracts == expected, || format!("contracts {:?}", amb.contracts))?;
    ensure(is_mlrp(&inst).is_ok(), || "B.4 should satisfy MLRP".into())?;
    let fast = solve_mlrp(&inst).map_err(|e| e.to_string())?;
    ensure(fast.contracts == amb.contracts, || "fast path contracts differ".into())?;
    ensure(fast.expected_payment == amb.expected_payment, || "fast path payment differs".into())
}

fn ac3_two_effort() -> Check {
    let inst = gen_two_effort_gap(&rat(1, 10), &rat(1, 2)).map_err(|e| e.to_string())?;
    let gap = ambiguity_gap(&inst).map_err(|e| e.to_string())?;
    ensure(gap.rho == GapRatio::Finite(rat(19, 10)), || format!("rho {:?}", gap.rho))?;
    ensure(gap.single_utility == rat(1, 10), || format!("single {}", gap.single_utility))?;
    ensure(gap.ambiguous_utility == rat(19, 100), || format!("ambiguous {}", gap.ambiguous_utility))?;
    let costly = inst.action_position(3).unwrap();
    let mp = min_payment(&inst, costly, false).map_err(|e| e.to_string())?.ok_or("infeasible")?;
    let t2 = &mp.contract.payments()[1];
    ensure(*t2 == rat(9, 20), || format!("t_2 = {t2}"))
}

fn ac4_probe() -> Check {
    let report = two_effort_upper_bound_probe(100, 20_240_601).map_err(|e| e.to_string())?;
    ensure(report.max_rho_hat <= int(2), || format!("max rho_hat {}", report.max_rho_hat))
}

fn ac5_sop_tight() -> Check {
    let fixture = gen_fixture(&FixtureSpec::SopTight { m: 5, delta: rat(1, 100) }).unwrap();
    let inst = &fixture.instance;
    let target = inst.n() - 1;
    let sol = solve_general_for_action(inst, target).map_err(|e| e.to_string())?;
    ensure(sol.result.expected_payment == int(1), || "payment should be 1".into())?;
    ensure(sol.result.contracts.len() == 5, || format!("{} contracts", sol.result.contracts.len()))?;
    let m = inst.m();
    for mask in 1u32..(1 << m) {
        let tau = AmbiguousContract::new(
            (0..m)
                .filter(|j| mask & (1 << j) != 0)
                .map(|j| Contract::sop(m, j, inst.p(target, j).recip()))
                .collect(),
        )
        .unwrap();
        let ok = validate(inst, &tau, target).passed();
        let full = mask.count_ones() as usize == m;
        ensure(ok == full, || format!("support mask {mask:b} gives {ok}"))?;
    }
    let single = min_payment(inst, target, false).map_err(|e| e.to_string())?.ok_or("infeasible")?;
    ensure(single.payment >= rat(3, 2), || format!("single payment {}", single.payment))
}

fn ac6_monotone_omega() -> Check {
    let spec = FixtureSpec::MonotoneOmega { n: 5, eps: rat(1, 10), gamma: rat(1, 100), delta: rat(1, 100) };
    let inst = gen_fixture(&spec).unwrap().instance;
    let amb = solve_monotone(&inst).map_err(|e| e.to_string())?;
    let floor = int(4) - rat(3, 10) + rat(1, 10_000);
    ensure(amb.principal_utility >= floor, || format!("monotone ambiguous {}", amb.principal_utility))?;
    let single = optimal_single(&inst, true).map_err(|e| e.to_string())?;
    let ceiling = int(1) + rat(1, 10_000);
    ensure(single.principal_utility <= ceiling, || format!("monotone single {}", single.principal_utility))
}

fn ac7_witness() -> Check {
    let sq = ContractCurve::power(int(1), 2).unwrap();
    let qu = ContractCurve::power(int(1), 4).unwrap();
    let w = witness_from_grid(&sq, &qu, &[rat(1, 2), int(2)])
        .map_err(|e| e.to_string())?
        .ok_or("no crossing on grid")?;
    let implementable = implementable(&w.instance, w.target).map_err(|e| e.to_string())?;
    ensure(!implementable, || "mixed action should not be implementable".into())?;
    ensure(validate(&w.instance, &w.tau, w.target).passed(), || "pair fails validation".into())?;
    let paid = expected_payment(&w.instance, w.target, &w.tau.contracts()[0]);
    ensure(paid == *w.instance.cost(w.target), || format!("pays {paid}, cost {}", w.target_cost))
}

fn ac8_oracles() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for trial in 0..200 {
        let raw = support::random_instance(&mut rng, 5, 5);
        let (inst, _) = dedupe_actions(&raw).unwrap();
        for i in 0..inst.n() {
            let sol = solve_general_for_action(&inst, i).map_err(|e| e.to_string())?;
            let theta = &sol.water_level.theta;
            ensure(
                support::is_least_level(|t| support::sop_family_feasible(&inst, i, t), theta),
                || format!("trial {trial} action {i}: θ = {theta} is not the least SOP level"),
            )?;
            if inst.m() <= 4 {
                for monotone in [false, true] {
                    let lp = min_payment(&inst, i, monotone).map_err(|e| e.to_string())?;
                    let oracle = support::vertex_min_payment(&inst, i, monotone);
                    ensure(lp.map(|mp| mp.payment) == oracle, || {
                        format!("trial {trial} action {i} monotone={monotone}: LP disagrees with vertices")
                    })?;
                }
            }
        }
    }
    Ok(())
}

fn ac9_unbounded() -> Check {
    let delta = rat(1, 10);
    let gap = gen_unbounded_gap(&UnboundedSpec::new(50, delta.clone())).map_err(|e| e.to_string())?;
    let inst = &gap.instance;
    let weights = &gap.replication.weights;
    let total: Rational = weights.iter().map(|(_, w)| w.clone()).sum();
    let mix: Vec<Rational> = (0..inst.m())
        .map(|j| weights.iter().map(|(a, w)| w * inst.p(*a, j)).sum())
        .collect();
    let mix_cost: Rational = weights.iter().map(|(a, w)| w * inst.cost(*a)).sum();
    ensure(total == int(1) && weights.iter().all(|(_, w)| !w.is_negative()), || "weights".into())?;
    ensure(mix == inst.row(gap.target), || "mixture does not replicate the target".into())?;
    ensure(mix_cost < *inst.cost(gap.target), || "replication does not undercut".into())?;
    ensure(!implementable(inst, gap.target).map_err(|e| e.to_string())?, || "target implementable".into())?;
    let sol = solve_general_for_action(inst, gap.target).map_err(|e| e.to_string())?;
    ensure(sol.result.principal_utility == delta, || format!("ambiguous U_P {}", sol.result.principal_utility))?;
    ensure(gap.certificate.passed(), || "SOP pair fails validation".into())?;
    ensure(gap.claim_holds().map_err(|e| e.to_string())?, || "some action beats ū".into())?;
    ensure(gap.harmonic_bound_verified, || "harmonic cost bound failed".into())?;

    let delta = delta_for_target(2.5, 50).map_err(|e| e.to_string())?;
    let gap = gen_unbounded_gap(&UnboundedSpec::new(50, delta)).map_err(|e| e.to_string())?;
    let report = ambiguity_gap(&gap.instance).map_err(|e| e.to_string())?;
    let rho = report.rho.finite().cloned().ok_or("unbounded ratio")?;
    ensure(rho > int(2), || format!("measured rho {rho}"))
}

/// Random `(instance, τ, i)` with `τ` consistent and incentive compatible:
/// an optimal set lifted to a higher level, plus rescaled random members.
fn random_triple(rng: &mut ChaCha8Rng, monotone: bool) -> Option<(Instance, AmbiguousContract, usize)> {
    let raw = support::random_instance(rng, 5, 5);
    let (inst, _) = dedupe_actions(&raw).unwrap();
    let i = rng.gen_range(0..inst.n());
    let base = if monotone {
        match solve_monotone_for_action(&inst, i).unwrap() {
            MonotoneOutcome::Solved(s) => s,
            MonotoneOutcome::NotImplementable { .. } => return None,
        }
    } else {
        solve_general_for_action(&inst, i).unwrap()
    };
    let lift = Rational::one() + rat(rng.gen_range(0..4), 4);
    let level = &base.water_level.theta * &lift;
    let mut members: Vec<Contract> = base
        .result
        .contracts
        .iter()
        .map(|t| Contract::new(t.payments().iter().map(|x| x * &lift).collect()).unwrap())
        .collect();
    for _ in 0..rng.gen_range(0..3) {
        let mut raw: Vec<i64> = (0..inst.m()).map(|_| rng.gen_range(0..=5)).collect();
        if monotone {
            raw.sort();
        }
        let t = Contract::new(raw.into_iter().map(int).collect()).unwrap();
        let paid = expected_payment(&inst, i, &t);
        if paid.is_positive() {
            let scale = &level / paid;
            members.push(Contract::new(t.payments().iter().map(|x| x * &scale).collect()).unwrap());
        }
    }
    let tau = AmbiguousContract::new(members).unwrap();
    validate(&inst, &tau, i).passed().then_some((inst, tau, i))
}

fn ac10_compression() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for monotone in [false, true] {
        let mut done = 0;
        while done < 200 {
            let Some((inst, tau, i)) = random_triple(&mut rng, monotone) else { continue };
            let out = if monotone {
                compress_to_step(&inst, &tau, i)
            } else {
                compress_to_sop(&inst, &tau, i)
            }
            .map_err(|e| e.to_string())?;
            let payment = expected_payment(&inst, i, &tau.contracts()[0]);
            let bound = inst.m().min(inst.n() - 1).max(1);
            ensure(out.certificate.passed(), || format!("output fails validation for action {i}"))?;
            ensure(out.incentivized_action == i, || "action changed".into())?;
            ensure(out.expected_payment == payment, || "payment changed".into())?;
            ensure(out.contracts.len() <= bound, || format!("{} contracts > {bound}", out.contracts.len()))?;
            let shape_ok = if monotone { out.contracts.all_step() || payment.is_zero() } else { out.contracts.all_sop() || payment.is_zero() };
            ensure(shape_ok, || "wrong contract shape".into())?;
            done += 1;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let criteria: [Criterion; 10] = [
        ("AC1 example 1 exact optima and gap", ac1_example1, secs(1)),
        ("AC2 MLRP instance optima and fast path", ac2_b4, secs(1)),
        ("AC3 two-effort gap 19/10", ac3_two_effort, secs(1)),
        ("AC4 two-effort first-best ratio at most 2", ac4_probe, secs(30)),
        ("AC5 tight SOP support needs all five", ac5_sop_tight, secs(10)),
        ("AC6 monotone gap instance", ac6_monotone_omega, secs(5)),
        ("AC7 crossing pair witness", ac7_witness, secs(1)),
        ("AC8 solvers match brute-force oracles", ac8_oracles, secs(60)),
        ("AC9 unbounded-gap construction", ac9_unbounded, secs(60)),
        ("AC10 compression preserves action and payment", ac10_compression, secs(30)),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (name, check, limit) in criteria {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|p| Err(p.downcast_ref::<String>().cloned().unwrap_or_else(|| "panic".into())));
        let spent = start.elapsed();
        let outcome = outcome.and_then(|()| {
            ensure(spent < limit, || format!("took longer than the {limit:?} limit"))
        });
        match outcome {
            Ok(()) => println!("PASS  {name}  ({spent:.2?})"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name}  ({spent:.2?}): {why}");
            }
        }
    }
    if failed == 0 {
        println!("acceptance: all 10 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} of 10 criteria failed");
        ExitCode::FAILURE
    }
}
