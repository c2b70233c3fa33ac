use num_traits::{Signed, Zero};
use serde::Serialize;

use super::{ModelError, SynergyModel};
use crate::exact::{self, ExactValue};
use crate::scenario::BudgetingScenario;
use crate::set::ProjectSet;
use crate::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Classification {
    Positive,
    Negative,
    Independent,
}

impl Classification {
    pub fn of(transform: &Rational) -> Self {
        if transform.is_positive() {
            Classification::Positive
        } else if transform.is_negative() {
            Classification::Negative
        } else {
            Classification::Independent
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Classification::Positive => "positive",
            Classification::Negative => "negative",
            Classification::Independent => "independent",
        }
    }
}

/// One detected interaction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InteractionRecord {
    pub subset: Vec<String>,
    pub cost: u64,
    #[serde(serialize_with = "exact::serialize")]
    pub rate: Rational,
    #[serde(serialize_with = "exact::serialize")]
    pub expected_rate: Rational,
    #[serde(serialize_with = "exact::serialize")]
    pub raw_term: Rational,
    #[serde(serialize_with = "exact::serialize")]
    pub transform: Rational,
    pub classification: Classification,
}

pub const INTERACTION_CSV_HEADER: [&str; 7] = [
    "subset",
    "cost",
    "rate",
    "expected_rate",
    "raw_term",
    "transform",
    "classification",
];

impl InteractionRecord {
    /// Row for the `;`-separated export; members joined by `,`.
    pub fn csv_row(&self) -> [String; 7] {
        [
            self.subset.join(","),
            self.cost.to_string(),
            self.rate.to_string(),
            self.expected_rate.to_string(),
            self.raw_term.to_string(),
            self.transform.to_string(),
            self.classification.as_str().to_string(),
        ]
    }

    pub fn decimal_transform(&self) -> f64 {
        ExactValue::from(&self.transform).decimal
    }
}

/// Interactions among 2..=`size_limit` projects (capped at the model's bound)
/// whose cost fits the budget and whose raw term reaches `threshold` in
/// absolute value, strongest transform first.
pub fn interaction_report(
    model: &SynergyModel,
    scenario: &BudgetingScenario,
    size_limit: usize,
    threshold: &Rational,
) -> Result<Vec<InteractionRecord>, ModelError> {
    model.check_bound_to(scenario)?;
    let limit = size_limit.min(model.additivity().limit());
    let n = scenario.num_projects();
    let budget = scenario.budget();
    let mut found: Vec<(ProjectSet, InteractionRecord)> = Vec::new();

    // depth-first over index-increasing subsets, pruned by cost
    let mut stack: Vec<(ProjectSet, usize, u64)> = vec![(ProjectSet::EMPTY, 0, 0)];
    while let Some((set, next, cost)) = stack.pop() {
        if set.len() >= 2 {
            let raw = model.raw_term(&set);
            if raw.abs() >= *threshold {
                let transform = model.transform_of(&set);
                found.push((
                    set,
                    InteractionRecord {
                        subset: scenario.ids_of(&set),
                        cost,
                        rate: model.rate(&set).value(),
                        expected_rate: model.expected_rate(&set),
                        classification: Classification::of(&transform),
                        raw_term: raw,
                        transform,
                    },
                ));
            }
        }
        if set.len() == limit {
            continue;
        }
        for a in (next..n).rev() {
            let c = cost + scenario.cost(a);
            if c <= budget {
                stack.push((set.with(a), a + 1, c));
            }
        }
    }
    found.sort_by(|(sa, a), (sb, b)| {
        b.transform
            .abs()
            .cmp(&a.transform.abs())
            .then(sa.len().cmp(&sb.len()))
            .then(sa.lex_cmp(sb))
    });
    debug_assert!(found.iter().all(|(_, r)| !r.subset.is_empty() || r.transform.is_zero()));
    Ok(found.into_iter().map(|(_, r)| r).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational;
    use crate::scenario::tests::example_one;
    use crate::synergy::Additivity;

    #[test]
    fn example_one_pairs() {
        let s = example_one();
        let m = SynergyModel::build(&s, Additivity::Bounded(2)).unwrap();
        let report = interaction_report(&m, &s, 2, &rational(0, 1)).unwrap();
        assert_eq!(report.len(), 10);
        let find = |ids: [&str; 2]| report.iter().find(|r| r.subset == ids).unwrap();
        let ab = find(["A", "B"]);
        assert_eq!(ab.classification, Classification::Positive);
        assert_eq!(ab.transform, rational(15, 16));
        let cd = find(["C", "D"]);
        assert_eq!(cd.classification, Classification::Negative);
        assert_eq!(cd.transform, rational(-1, 1));
        assert_eq!(cd.expected_rate, rational(1, 4));
        assert!(report
            .windows(2)
            .all(|w| w[0].transform.abs() >= w[1].transform.abs()));
    }

    #[test]
    fn threshold_filters() {
        let s = example_one();
        let m = SynergyModel::build(&s, Additivity::Bounded(2)).unwrap();
        let report = interaction_report(&m, &s, 2, &rational(1, 1)).unwrap();
        assert!(report.iter().all(|r| r.raw_term.abs() >= rational(1, 1)));
        assert!(report.iter().any(|r| r.subset == ["C", "D"]));
        assert!(interaction_report(&m, &s, 2, &rational(100, 1)).unwrap().is_empty());
    }

    #[test]
    fn k1_reports_nothing() {
        let s = example_one();
        let m = SynergyModel::build(&s, Additivity::Bounded(1)).unwrap();
        assert!(interaction_report(&m, &s, 3, &rational(0, 1)).unwrap().is_empty());
    }

    #[test]
    fn csv_row_matches_fields() {
        let s = example_one();
        let m = SynergyModel::build(&s, Additivity::Bounded(2)).unwrap();
        let report = interaction_report(&m, &s, 2, &rational(0, 1)).unwrap();
        let row = report[0].csv_row();
        assert_eq!(row[0], report[0].subset.join(","));
        assert_eq!(row[5], report[0].transform.to_string());
    }
}
