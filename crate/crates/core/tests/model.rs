mod support;

use ambicon::gap::{gen_fixture, FixtureSpec};
use ambicon::model::{
    agent_utility, best_response, dedupe_actions, is_consistent, is_mlrp, maxmin_best_response,
    worst_case_utility, MlrpWitness,
};
use ambicon::rational::{int, rat, Rational};
use ambicon::{AmbiguousContract, Contract, Instance, ModelError};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn example1() -> Instance {
    gen_fixture(&FixtureSpec::Example1).unwrap().instance
}

fn c(xs: &[i64]) -> Contract {
    Contract::new(xs.iter().map(|&x| int(x)).collect()).unwrap()
}

#[test]
fn rejects_malformed_instances() {
    let half = || vec![rat(1, 2), rat(1, 2)];
    assert_eq!(Instance::new(vec![], vec![int(0)], vec![]), Err(ModelError::NoActions));
    assert!(matches!(
        Instance::new(vec![int(0)], vec![int(0), int(1)], vec![vec![rat(1, 2), rat(1, 3)]]),
        Err(ModelError::RowSum { .. })
    ));
    assert!(matches!(
        Instance::new(vec![int(-1)], vec![int(0), int(1)], vec![half()]),
        Err(ModelError::NegativeCost { .. })
    ));
    assert!(matches!(
        Instance::new(vec![int(0)], vec![int(0), int(-1)], vec![half()]),
        Err(ModelError::NegativeReward { .. })
    ));
    assert!(matches!(
        Instance::new(vec![int(0), int(1)], vec![int(0), int(1)], vec![half()]),
        Err(ModelError::RowCount { .. })
    ));
    assert!(Contract::new(vec![int(1), int(-1)]).is_err());
}

#[test]
fn sorts_by_cost_and_reward_and_keeps_origins() {
    let inst = Instance::with_labels(
        vec![int(2), int(0), int(1)],
        vec![int(5), int(0)],
        vec![vec![int(1), int(0)], vec![int(0), int(1)], vec![rat(1, 2), rat(1, 2)]],
        Some(vec!["hi".into(), "lo".into(), "mid".into()]),
        None,
    )
    .unwrap();
    assert_eq!(inst.costs(), &[int(0), int(1), int(2)]);
    assert_eq!(inst.rewards(), &[int(0), int(5)]);
    assert_eq!(inst.action_label(0), "lo");
    assert_eq!(inst.action_origin(2), 0);
    assert_eq!(inst.action_position(1), Some(0));
    assert_eq!(inst.row(2), &[int(0), int(1)]);
    assert_eq!(inst.payments_to_original(&[int(0), int(7)]), vec![int(7), int(0)]);
    let layout = inst.original_layout();
    assert_eq!(layout.costs, vec![int(2), int(0), int(1)]);
    assert_eq!(layout.rewards, vec![int(5), int(0)]);
}

#[test]
fn example1_is_not_mlrp() {
    // Action 3 against action 2, outcomes 2 and 3 (1-based).
    assert_eq!(is_mlrp(&example1()), Err(MlrpWitness { i: 2, i_prime: 1, j: 1, j_prime: 2 }));
}

#[test]
fn example1_welfare_and_best_responses() {
    let inst = example1();
    assert_eq!(inst.first_best(), (2, int(3)));
    let t = c(&[0, 2, 0]);
    assert_eq!(agent_utility(&inst, 0, &t), int(1));
    assert_eq!(best_response(&inst, &t), 0);
    let tau = AmbiguousContract::new(vec![c(&[0, 2, 0]), c(&[0, 0, 4])]).unwrap();
    assert_eq!(worst_case_utility(&inst, 2, &tau), int(0));
    assert_eq!(maxmin_best_response(&inst, &tau), 2);
    assert!(is_consistent(&inst, &tau, 2));
    assert!(!is_consistent(&inst, &tau, 1));
}

#[test]
fn prune_removes_dominated_members() {
    let tau = AmbiguousContract::new(vec![c(&[1, 1]), c(&[2, 2]), c(&[0, 3])]).unwrap();
    let pruned = tau.prune_dominated();
    assert_eq!(pruned, AmbiguousContract::new(vec![c(&[1, 1]), c(&[0, 3])]).unwrap());
}

#[test]
fn ambiguous_contracts_are_sets() {
    let a = AmbiguousContract::new(vec![c(&[0, 3]), c(&[1, 1]), c(&[0, 3])]).unwrap();
    let b = AmbiguousContract::new(vec![c(&[1, 1]), c(&[0, 3])]).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.len(), 2);
    assert!(AmbiguousContract::new(vec![]).is_err());
}

#[test]
fn sop_and_step_shapes() {
    let sop = Contract::sop(4, 2, int(3));
    let step = Contract::step(4, 1, int(3));
    assert!(sop.is_sop() && !sop.is_monotone());
    assert!(step.is_step() && step.is_monotone());
    assert_eq!(step.payments(), &[int(0), int(3), int(3), int(3)]);
    assert!(!sop.has_proper_crossing(&step));
    assert!(Contract::sop(4, 1, int(5)).has_proper_crossing(&step));
    assert!(!step.has_proper_crossing(&Contract::step(4, 1, int(5))));
}

#[test]
fn dedupe_keeps_cheapest_copy() {
    let inst = Instance::new(
        vec![int(1), int(0), int(2)],
        vec![int(0), int(1)],
        vec![vec![rat(1, 2), rat(1, 2)], vec![rat(1, 2), rat(1, 2)], vec![int(0), int(1)]],
    )
    .unwrap();
    let (reduced, report) = dedupe_actions(&inst).unwrap();
    assert_eq!(reduced.n(), 2);
    assert_eq!(reduced.costs(), &[int(0), int(2)]);
    assert_eq!(report.removed.len(), 1);
    assert_eq!(inst.cost(report.original(0)), &int(0));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rows_sum_to_one_and_costs_ascend(seed in any::<u64>()) {
        let inst = support::random_instance(&mut ChaCha8Rng::seed_from_u64(seed), 6, 6);
        for i in 0..inst.n() {
            let total: Rational = inst.row(i).iter().sum();
            prop_assert_eq!(total, int(1));
        }
        prop_assert!(inst.costs().windows(2).all(|w| w[0] <= w[1]));
        prop_assert!(inst.rewards().windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn original_layout_round_trips(seed in any::<u64>()) {
        let inst = support::random_instance(&mut ChaCha8Rng::seed_from_u64(seed), 6, 6);
        let layout = inst.original_layout();
        let again = Instance::new(layout.costs, layout.rewards, layout.probs).unwrap();
        prop_assert_eq!(&again.costs(), &inst.costs());
        prop_assert_eq!(&again.probs(), &inst.probs());
        let payments: Vec<Rational> = (0..inst.m()).map(|j| int(j as i64)).collect();
        prop_assert_eq!(inst.payments_from_original(&inst.payments_to_original(&payments)), payments);
    }

    #[test]
    fn dedupe_leaves_distinct_rows(seed in any::<u64>()) {
        let inst = support::random_instance(&mut ChaCha8Rng::seed_from_u64(seed), 6, 3);
        let (reduced, report) = dedupe_actions(&inst).unwrap();
        prop_assert!(reduced.duplicate_rows().is_none());
        prop_assert_eq!(reduced.n() + report.removed.len(), inst.n());
        for k in 0..reduced.n() {
            prop_assert_eq!(reduced.row(k), inst.row(report.original(k)));
        }
    }

    #[test]
    fn generated_mlrp_instances_pass_the_check(seed in any::<u64>()) {
        let inst = support::random_mlrp_instance(&mut ChaCha8Rng::seed_from_u64(seed), 5, 5);
        prop_assert!(is_mlrp(&inst).is_ok());
    }

    #[test]
    fn pruning_keeps_worst_case(seed in any::<u64>(), raw in prop::collection::vec(prop::collection::vec(0i64..4, 3), 1..6)) {
        let inst = support::random_instance(&mut ChaCha8Rng::seed_from_u64(seed), 4, 3);
        let m = inst.m();
        let tau = AmbiguousContract::new(raw.iter().map(|r| c(&r[..m])).collect()).unwrap();
        let pruned = tau.prune_dominated();
        for i in 0..inst.n() {
            prop_assert_eq!(worst_case_utility(&inst, i, &tau), worst_case_utility(&inst, i, &pruned));
        }
        for (a, t) in pruned.iter().enumerate() {
            for (b, u) in pruned.iter().enumerate() {
                prop_assert!(a == b || !t.dominates(u));
            }
        }
    }
}
