//! Randomized properties checked against direct enumeration.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use pb_synergy::generate::{random_scenario, RandomShape};
use pb_synergy::scenario::{parse_pabulib, serialize_pabulib, validate, BudgetingScenario, ValidationPolicy};
use pb_synergy::set::ProjectSet;
use pb_synergy::solver::{branch_and_bound, brute_force, Aggregator};
use pb_synergy::synergy::{Additivity, SynergyModel};
use pb_synergy::Rational;

fn scenario(seed: u64, max_projects: usize) -> BudgetingScenario {
    let shape = RandomShape::default().with_projects(2, max_projects).with_voters(1, 10);
    random_scenario(&mut ChaCha8Rng::seed_from_u64(seed), &shape)
}

fn additivity(k: usize) -> Additivity {
    if k == 0 {
        Additivity::Unbounded
    } else {
        Additivity::Bounded(k)
    }
}

fn alpha_of(i: usize) -> Aggregator {
    [Aggregator::Sum, Aggregator::Min, Aggregator::Product][i]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn branch_and_bound_matches_enumeration(seed in any::<u64>(), k in 0usize..4, a in 0usize..3) {
        let scenario = scenario(seed, 9);
        let model = SynergyModel::build(&scenario, additivity(k)).unwrap();
        let alpha = alpha_of(a);
        let fast = branch_and_bound(&model, &scenario, alpha).unwrap();
        let slow = brute_force(&model, &scenario, alpha).unwrap();
        prop_assert_eq!(&fast.ids, &slow.ids);
        prop_assert_eq!(&fast.score, &slow.score);
        prop_assert!(fast.optimal);
    }

    #[test]
    fn utility_is_the_sum_of_subset_transforms(seed in any::<u64>(), k in 0usize..4) {
        let scenario = scenario(seed, 7);
        let model = SynergyModel::build(&scenario, additivity(k)).unwrap();
        let n = scenario.num_projects();
        for mask in 0u64..1 << n {
            let set = ProjectSet::from_mask(mask);
            let direct: Rational = (0u64..1 << n)
                .filter(|sub| sub & !mask == 0 && *sub != 0)
                .map(|sub| model.transform_of(&ProjectSet::from_mask(sub)))
                .sum();
            prop_assert_eq!(model.utility_of(&set), direct);
        }
    }

    #[test]
    fn singleton_transforms_are_costs(seed in any::<u64>(), k in 0usize..4) {
        let scenario = scenario(seed, 8);
        let model = SynergyModel::build(&scenario, additivity(k)).unwrap();
        for a in 0..scenario.num_projects() {
            let cost = Rational::from_integer(scenario.cost(a).into());
            prop_assert_eq!(model.transform_of(&ProjectSet::singleton(a)), cost);
        }
    }

    #[test]
    fn serialization_round_trips(seed in any::<u64>()) {
        let scenario = scenario(seed, 12);
        let text = serialize_pabulib(&scenario);
        let (back, report) = validate(parse_pabulib(&text).unwrap(), ValidationPolicy::Strict).unwrap();
        prop_assert_eq!(report.warning_count(), 0);
        prop_assert_eq!(serialize_pabulib(&back), text);
        prop_assert_eq!(back.projects(), scenario.projects());
        prop_assert_eq!(back.ballots(), scenario.ballots());
    }
}
