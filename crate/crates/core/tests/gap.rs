mod support;

use ambicon::ambiguous::solve_monotone;
use ambicon::gap::{
    ambiguity_gap, delta_for_target, gen_diagonal, gen_fixture, gen_two_effort_gap,
    gen_unbounded_gap, shape_restricted_payment, target_ratio, two_effort_upper_bound_probe,
    FixtureSpec, GapRatio, UnboundedSpec,
};
use ambicon::lp::min_payment;
use ambicon::rational::{int, rat, Rational};
use ambicon::Instance;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn fixture_references_hold() {
    let fx = gen_fixture(&FixtureSpec::Example1).unwrap();
    let gap = ambiguity_gap(&fx.instance).unwrap();
    assert_eq!(&gap.single_utility, fx.reference("single_utility").unwrap());
    assert_eq!(&gap.ambiguous_utility, fx.reference("ambiguous_utility").unwrap());
    assert_eq!(gap.rho, GapRatio::Finite(fx.reference("rho").unwrap().clone()));

    let spec = FixtureSpec::MonotoneOmega { n: 6, eps: rat(1, 10), gamma: rat(1, 100), delta: rat(1, 100) };
    let fx = gen_fixture(&spec).unwrap();
    let amb = solve_monotone(&fx.instance).unwrap();
    assert!(amb.principal_utility >= *fx.reference("ambiguous_lower").unwrap());
    assert_eq!(amb.incentivized_action, 4);
}

#[test]
fn sop_tight_requires_m_at_least_four() {
    assert!(gen_fixture(&FixtureSpec::SopTight { m: 3, delta: rat(1, 100) }).is_err());
}

#[test]
fn two_effort_parameters_are_checked() {
    assert!(gen_two_effort_gap(&rat(1, 2), &rat(1, 4)).is_err());
    assert!(gen_two_effort_gap(&int(0), &rat(1, 4)).is_err());
}

#[test]
fn two_effort_gap_near_two_is_not_exceeded() {
    let inst = gen_two_effort_gap(&rat(1, 100), &rat(2, 100)).unwrap();
    let gap = ambiguity_gap(&inst).unwrap();
    let rho_hat = gap.rho_hat.finite().unwrap().clone();
    assert_eq!(gap.rho, GapRatio::Finite(rat(199, 100)));
    assert!(rho_hat >= rat(199, 100) && rho_hat <= int(2));
}

#[test]
fn probe_is_reproducible() {
    let a = two_effort_upper_bound_probe(40, 7).unwrap();
    let b = two_effort_upper_bound_probe(40, 7).unwrap();
    assert_eq!(a, b);
    assert!(a.max_rho_hat <= int(2));
}

#[test]
fn unbounded_gap_small_scale() {
    let gap = gen_unbounded_gap(&UnboundedSpec::new(4, rat(1, 4))).unwrap();
    let inst = &gap.instance;
    assert_eq!(gap.target_utility(), rat(1, 4));
    assert!(gap.certificate.passed());
    assert!(gap.harmonic_bound_verified);
    assert!(gap.claim_holds().unwrap());
    assert!(min_payment(inst, gap.target, false).unwrap().is_none());

    let report = ambiguity_gap(inst).unwrap();
    assert!(report.single_utility <= gap.u_bar);
    assert!(report.ambiguous_utility >= rat(1, 4));
}

#[test]
fn delta_for_target_reaches_the_target_ratio() {
    for (z, x) in [(1.5, 8), (2.0, 20), (2.5, 50)] {
        let delta = delta_for_target(z, x).unwrap();
        let reached = target_ratio(x, ambicon::rational::to_f64(&delta)).unwrap();
        assert!(reached >= z, "z = {z}, x = {x}: reached {reached}");
    }
}

fn two_effort_params() -> impl Strategy<Value = (Rational, Rational)> {
    (1i64..40, 1i64..40, 41i64..100).prop_map(|(a, b, d)| {
        let (lo, hi) = if a < b { (a, b) } else if a > b { (b, a) } else { (a, a + 1) };
        (rat(lo, d), rat(hi, d))
    })
}

fn diagonal_with_high_action(seed: u64) -> Instance {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = rng.gen_range(3..=5);
    let mut rewards = vec![int(0)];
    let mut r = Rational::zero();
    for _ in 1..m {
        r += rat(rng.gen_range(1..=4), 2);
        rewards.push(r.clone());
    }
    let welfare = rat(rng.gen_range(1..=4), 8) * &rewards[1];
    let rows = gen_diagonal(&rewards, &welfare, &Rational::zero()).unwrap();
    let mut costs: Vec<Rational> = rows.iter().map(|row| row.cost.clone()).collect();
    let mut probs: Vec<Vec<Rational>> = rows.into_iter().map(|row| row.probs).collect();
    costs.push(rat(rng.gen_range(1..=8), 8));
    probs.push(support::random_row(&mut rng, m));
    Instance::new(costs, rewards, probs).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn two_effort_gap_is_two_minus_eps((eps, delta) in two_effort_params()) {
        let inst = gen_two_effort_gap(&eps, &delta).unwrap();
        let gap = ambiguity_gap(&inst).unwrap();
        prop_assert_eq!(gap.rho, GapRatio::Finite(int(2) - &eps));
        let costly = inst.n() - 1;
        let lp = min_payment(&inst, costly, false).unwrap().unwrap();
        prop_assert_eq!(lp.payment, Rational::one() - &eps);
    }

    #[test]
    fn shape_restriction_keeps_the_payment(seed in any::<u64>()) {
        let inst = diagonal_with_high_action(seed);
        let high = inst.n() - 1;
        let free = min_payment(&inst, high, false).unwrap().map(|m| m.payment);
        prop_assert_eq!(shape_restricted_payment(&inst, high).unwrap(), free);
    }

    #[test]
    fn gap_bounded_by_first_best_ratio(seed in any::<u64>()) {
        let inst = support::random_instance(&mut ChaCha8Rng::seed_from_u64(seed), 5, 5);
        let gap = ambiguity_gap(&inst).unwrap();
        prop_assert!(gap.ambiguous_utility >= gap.single_utility);
        prop_assert!(gap.ambiguous_utility <= gap.first_best_welfare);
        if gap.single_utility.is_positive() {
            let rho = gap.rho.finite().unwrap();
            prop_assert!(*rho >= int(1));
            prop_assert!(rho <= gap.rho_hat.finite().unwrap());
        }
    }
}
