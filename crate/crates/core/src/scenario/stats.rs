use num_bigint::BigInt;
use num_traits::Zero;

use super::BudgetingScenario;
use crate::Rational;

/// Share of projects per budget decile: entry `j` counts costs in
/// `((j-1)·l/10, j·l/10]`, with costs above the budget folded into the last bin.
pub fn cost_decile_vector(scenario: &BudgetingScenario) -> Vec<Rational> {
    let mut counts = [0u64; 10];
    let l = scenario.budget() as u128;
    for p in scenario.projects() {
        let bin = (10 * p.cost as u128).div_ceil(l).clamp(1, 10) as usize;
        counts[bin - 1] += 1;
    }
    let n = BigInt::from(scenario.num_projects());
    counts
        .iter()
        .map(|&c| Rational::new(BigInt::from(c), n.clone()))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BudgetUtilization {
    pub mean: Rational,
    pub median: Rational,
}

/// Mean and median over ballots of `cost(A_i) / l`.
pub fn budget_utilization(scenario: &BudgetingScenario) -> BudgetUtilization {
    let l = BigInt::from(scenario.budget());
    let mut spent: Vec<u64> = scenario
        .ballots()
        .iter()
        .map(|b| scenario.set_cost(&b.approvals))
        .collect();
    spent.sort_unstable();
    let v = spent.len();
    let total: u64 = spent.iter().sum();
    let mean = Rational::new(BigInt::from(total), l.clone() * BigInt::from(v));
    let median = if v % 2 == 1 {
        Rational::new(BigInt::from(spent[v / 2]), l)
    } else {
        Rational::new(
            BigInt::from(spent[v / 2 - 1]) + BigInt::from(spent[v / 2]),
            l * BigInt::from(2),
        )
    };
    debug_assert!(!mean.numer().is_zero() || total == 0);
    BudgetUtilization { mean, median }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::tests::example_one;
    use crate::scenario::{validate, RawScenario, ValidationPolicy};
    use crate::rational;

    #[test]
    fn deciles_of_example_one() {
        let v = cost_decile_vector(&example_one());
        let expected = [0, 2, 1, 2, 0, 0, 0, 0, 0, 0]
            .map(|c| rational(c, 5));
        assert_eq!(v, expected);
    }

    #[test]
    fn deciles_saturate_last_bin() {
        let raw = RawScenario::from_parts(7, [("a", 7), ("b", 7)], [("v", vec!["a"])]);
        let (s, _) = validate(raw, ValidationPolicy::Strict).unwrap();
        let v = cost_decile_vector(&s);
        assert_eq!(v[9], rational(1, 1));
        assert!(v[..9].iter().all(Zero::is_zero));
    }

    #[test]
    fn utilization_examples() {
        let u = budget_utilization(&example_one());
        assert_eq!(u.mean, rational(25, 36));
        assert_eq!(u.median, rational(13, 18));

        let raw = RawScenario::from_parts(4, [("a", 1)], [("v", vec![])]);
        let (s, _) = validate(raw, ValidationPolicy::Strict).unwrap();
        let u = budget_utilization(&s);
        assert!(u.mean.is_zero() && u.median.is_zero());

        let raw = RawScenario::from_parts(
            4,
            [("a", 4), ("b", 2), ("c", 2)],
            [("v", vec!["a"]), ("w", vec!["b", "c"])],
        );
        let (s, _) = validate(raw, ValidationPolicy::Strict).unwrap();
        let u = budget_utilization(&s);
        assert_eq!((u.mean, u.median), (rational(1, 1), rational(1, 1)));
    }
}
