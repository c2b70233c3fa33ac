use super::*;
use crate::generate::RandomShape;
use crate::rational;
use crate::scenario::tests::example_one;
use crate::scenario::RawScenario;
use crate::solver::{Aggregator, SolveOptions};

fn scenario(budget: u64, projects: &[(&str, u64)], ballots: &[(&str, Vec<&str>)]) -> BudgetingScenario {
    let raw = RawScenario::from_parts(budget, projects.to_vec(), ballots.to_vec());
    validate(raw, ValidationPolicy::Strict).unwrap().0
}

fn k(limit: usize) -> Additivity {
    Additivity::Bounded(limit)
}

fn set(s: &BudgetingScenario, ids: &[&str]) -> ProjectSet {
    s.set_of(ids).unwrap()
}

#[test]
fn cost_consistency_and_its_control() {
    let s = example_one();
    let m = SynergyModel::build(&s, k(2)).unwrap();
    assert!(check_cost_consistency(&m, &s).unwrap().holds);

    let bad = m.with_transform_override(set(&s, &["C"]), rational(4, 1));
    let v = check_cost_consistency(&bad, &s).unwrap();
    assert!(!v.holds);
    assert_eq!(v.witness.unwrap().sets, [["C"]]);

    let lonely = scenario(4, &[("a", 1), ("b", 2)], &[("1", vec!["a"]), ("2", vec!["b"])]);
    let m = SynergyModel::build(&lonely, k(1)).unwrap();
    assert!(check_cost_consistency(&m, &lonely).unwrap().holds);
}

#[test]
fn superset_monotonicity_of_example_one() {
    let s = example_one();
    let m = SynergyModel::build(&s, k(2)).unwrap();
    // the floor binds for {C, D}
    assert_eq!(m.utility_of(&set(&s, &["C", "D"])), m.utility_of(&set(&s, &["C"])));
    let v = check_superset_monotonicity(&m, &s, 4, 0).unwrap();
    assert!(v.holds, "{v:?}");
    assert!(v.universe.contains("all 32 subsets"));

    let m1 = SynergyModel::build(&s, k(1)).unwrap();
    assert!(check_superset_monotonicity(&m1, &s, 4, 0).unwrap().holds);
}

#[test]
fn superset_monotonicity_control() {
    let s = example_one();
    let m = SynergyModel::build(&s, k(2)).unwrap();
    let cd = set(&s, &["C", "D"]);
    let bad = m.with_transform_override(cd, rational(-2, 1));
    let v = check_superset_monotonicity(&bad, &s, 2, 0).unwrap();
    assert!(!v.holds);
    let w = v.witness.unwrap();
    assert_eq!(w.sets[0], ["C", "D"]);
}

#[test]
fn superset_monotonicity_samples_large_scenarios() {
    let s = crate::generate::random_batch(3, 1, &RandomShape::default().with_projects(12, 12)).remove(0);
    let m = SynergyModel::build(&s, k(2)).unwrap();
    let v = check_superset_monotonicity(&m, &s, 2, 9).unwrap();
    assert!(v.universe.contains("1000 random subsets (seed 9)"));
    assert_eq!(v, check_superset_monotonicity(&m, &s, 2, 9).unwrap());
}

#[test]
fn synergy_effects_of_example_one() {
    let s = example_one();
    let m = SynergyModel::build(&s, k(2)).unwrap();
    assert_eq!(m.utility_of(&set(&s, &["A", "B"])), rational(95, 16));
    let (pos, neg) = check_synergy_effects(&m, &s).unwrap();
    assert!(pos.holds && neg.holds, "{pos:?} {neg:?}");
    assert!(pos.universe.starts_with("1 block-approved"));

    let (pos, _) = check_synergy_effects(&m.with_transform_override(set(&s, &["A", "B"]), rational(0, 1)), &s).unwrap();
    assert!(!pos.holds);
    assert_eq!(pos.witness.unwrap().sets, [["A", "B"]]);

    let (_, neg) = check_synergy_effects(&m.with_transform_override(set(&s, &["C", "D"]), rational(1, 1)), &s).unwrap();
    assert!(!neg.holds);
    assert_eq!(neg.witness.unwrap().sets, [["C", "D"]]);
}

#[test]
fn universally_approved_block_needs_only_the_weak_inequality() {
    let s = scenario(4, &[("a", 1), ("b", 2)], &[("1", vec!["a", "b"]), ("2", vec!["a", "b"])]);
    let m = SynergyModel::build(&s, k(2)).unwrap();
    assert_eq!(m.utility_of(&s.all_projects()), rational(3, 1));
    assert!(check_synergy_effects(&m, &s).unwrap().0.holds);
}

#[test]
fn strict_positive_synergy_fails_without_interactions() {
    let s = example_one();
    let m = SynergyModel::build(&s, k(1)).unwrap();
    let (pos, neg) = check_synergy_effects(&m, &s).unwrap();
    assert!(!pos.holds);
    assert!(neg.holds);
}

fn regrouping_instance() -> BudgetingScenario {
    scenario(
        6,
        &[("a", 2), ("b", 2), ("c", 1), ("d", 3)],
        &[
            ("1", vec!["a", "c"]),
            ("2", vec!["b"]),
            ("3", vec!["d"]),
            ("4", vec!["a", "d"]),
        ],
    )
}

#[test]
fn regrouping_raises_the_utility_of_the_regrouped_set() {
    let s = regrouping_instance();
    let v = check_regrouping_monotonicity(&s, k(2), &["a", "b"], "1", "2").unwrap();
    assert!(v.holds, "{v:?}");

    let corrupted = |e: &BudgetingScenario| {
        let m = SynergyModel::lazy(e, k(2))?;
        Ok(m.with_transform_override(e.set_of(&["a", "b"]).unwrap(), rational(0, 1)))
    };
    assert!(!regrouping_with(&s, &["a", "b"], "1", "2", &corrupted).unwrap().holds);
    assert!(!check_regrouping_monotonicity(&s, k(1), &["a", "b"], "1", "2").unwrap().holds);
}

#[test]
fn regrouping_preconditions() {
    let s = regrouping_instance();
    let err = |set: &[&str], a, b| check_regrouping_monotonicity(&s, k(2), set, a, b).unwrap_err();
    assert!(matches!(err(&["a", "d"], "1", "4"), AxiomError::Precondition(m) if m.contains("overlap")));
    assert!(matches!(err(&["a", "c"], "1", "2"), AxiomError::Precondition(m) if m.contains("inside")));
    assert!(matches!(err(&["a", "d"], "1", "2"), AxiomError::Precondition(m) if m.contains("covered")));
    assert!(matches!(err(&["a", "b"], "1", "1"), AxiomError::Precondition(_)));
    assert!(matches!(err(&["a", "b"], "1", "9"), AxiomError::Scenario(_)));
}

#[test]
fn regrouping_case_discovery() {
    let s = regrouping_instance();
    let cases = regrouping_cases(&s, 100);
    assert!(cases.contains(&RegroupingCase {
        set: vec!["a".into(), "b".into()],
        first: "1".into(),
        second: "2".into(),
    }));
    for c in &cases {
        assert!(check_regrouping_monotonicity(&s, k(2), &c.set, &c.first, &c.second).is_ok());
    }
    assert_eq!(regrouping_cases(&s, 2).len(), 2);
}

#[test]
fn neutrality_swaps() {
    let s = example_one();
    let v = check_cost_aware_neutrality(&s, k(2), "D", "E").unwrap();
    assert!(v.holds, "{v:?}");
    assert!(check_cost_aware_neutrality(&s, k(2), "B", "C").unwrap().holds);
    assert!(check_cost_aware_neutrality(&s, k(3), "D", "D").unwrap().holds);
    assert!(matches!(
        check_cost_aware_neutrality(&s, k(2), "A", "B"),
        Err(AxiomError::UnequalCosts { ca: 2, cb: 3, .. })
    ));

    // a model that favours whichever project has index 3 is not relabelling-invariant
    let biased = |e: &BudgetingScenario| {
        let m = SynergyModel::build(e, k(2))?;
        let pair = ProjectSet::singleton(3).with(0);
        let value = m.transform_of(&pair) + rational(1, 1);
        Ok(m.with_transform_override(pair, value))
    };
    assert!(!neutrality_with(&s, "D", "E", 2, &biased).unwrap().holds);
}

#[test]
fn inclusion_maximality() {
    let s = example_one();
    let m = SynergyModel::build(&s, k(2)).unwrap();
    for alpha in Aggregator::ALL {
        assert!(check_inclusion_maximality(&m, &s, alpha, SolveOptions::default()).unwrap().holds);
    }

    let nothing_fits = scenario(2, &[("a", 3), ("b", 5)], &[("1", vec![])]);
    let m = SynergyModel::build(&nothing_fits, k(2)).unwrap();
    assert!(check_inclusion_maximality(&m, &nothing_fits, Aggregator::Sum, SolveOptions::default()).unwrap().holds);

    let unloved = scenario(2, &[("a", 1), ("z", 1)], &[("1", vec!["a"])]);
    let m = SynergyModel::build(&unloved, k(2)).unwrap();
    let hook = SolveOptions {
        exhaustive: false,
        ..SolveOptions::default()
    };
    let v = check_inclusion_maximality(&m, &unloved, Aggregator::Sum, hook).unwrap();
    assert!(!v.holds);
    assert_eq!(v.witness.unwrap().sets[1], ["z"]);
}

#[test]
fn splitting_monotonicity() {
    let s = example_one();
    for alpha in Aggregator::ALL {
        let v = check_splitting_monotonicity(&s, alpha, k(2), "A", &[1, 1]).unwrap();
        assert!(v.holds, "{alpha} {v:?}");
        assert!(check_splitting_monotonicity(&s, alpha, k(2), "A", &[2]).unwrap().holds);
    }
    assert!(matches!(
        check_splitting_monotonicity(&s, Aggregator::Sum, k(2), "A", &[1, 2]),
        Err(AxiomError::CostMismatch { expected: 2, got: 3 })
    ));
}

#[test]
fn merging_parameters() {
    assert_eq!(merging_gain(7), rational(112, 225));
    assert_eq!(smallest_merging_faction(), 5);
    assert!(merging_fixture_sum(4).is_err());
    assert!(merging_fixture_sum(MERGING_SUM_FACTION).is_ok());
}

#[test]
fn fixtures_exhibit_their_violations() {
    let reports = run_counterexample_fixtures(&Aggregator::ALL).unwrap();
    assert_eq!(reports.len(), 9);
    for r in &reports {
        assert!(r.exhibits_violation(), "{} {}: {:?} -> {:?}", r.name, r.aggregator, r.before, r.after);
    }
    let winners = |name: &str, alpha: Aggregator| {
        let r = reports.iter().find(|r| r.name == name && r.aggregator == alpha).unwrap();
        (r.before.join(","), r.after.join(","))
    };
    let pair = |a: &str, b: &str| (a.to_string(), b.to_string());
    assert_eq!(winners("discount", Aggregator::Sum), pair("x1,x2", "x2,y"));
    assert_eq!(winners("discount", Aggregator::Min), pair("x1,y", "x2,y"));
    assert_eq!(winners("discount", Aggregator::Product), pair("x1,y", "x2,y"));
    assert_eq!(winners("limit", Aggregator::Sum), pair("x3", "x1,x2"));
    assert_eq!(winners("limit", Aggregator::Min), pair("x1,x3", "x2,x3"));
    assert_eq!(winners("merging", Aggregator::Sum), pair("x1,x2", "y"));
    assert_eq!(winners("merging", Aggregator::Product), pair("x1,x2,y", "x3,x4,y"));
}

#[test]
fn suite_on_example_one() {
    let s = example_one();
    let verdicts = utility_suite(&s, k(2), 1).unwrap();
    let names: Vec<&str> = verdicts.iter().map(|v| v.axiom.as_str()).collect();
    assert_eq!(names, AXIOM_ORDER);
    for v in &verdicts {
        assert_eq!(v.holds, v.witness.is_none());
    }
}

#[test]
fn batch_tallies_are_reproducible() {
    let shape = RandomShape::default();
    let a = run_utility_batch(5, 6, &shape, k(2)).unwrap();
    let b = run_utility_batch(5, 6, &shape, k(2)).unwrap();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    for t in &a.tallies {
        assert_eq!(t.checked, 6);
    }
    let cost = &a.tallies[0];
    assert_eq!(cost.failed, 0);
}
