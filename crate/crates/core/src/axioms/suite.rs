//! The six utility-function checks run together, on one scenario or a
//! seeded batch.

use serde::Serialize;

use super::{
    check_cost_aware_neutrality, check_cost_consistency, check_regrouping_monotonicity,
    check_superset_monotonicity, check_synergy_effects, AxiomError, AxiomVerdict, COST_CONSISTENCY,
    NEGATIVE_SYNERGY, NEUTRALITY, POSITIVE_SYNERGY, REGROUPING, SUPERSET_MONOTONICITY,
};
use crate::generate::{random_batch, RandomShape};
use crate::scenario::BudgetingScenario;
use crate::set::ProjectSet;
use crate::synergy::{Additivity, SynergyModel, EAGER_SIZE_CAP};

/// Regrouping cases checked per scenario.
pub const REGROUPING_CASES: usize = 8;
/// Largest regrouped set.
pub const REGROUPING_SIZE: usize = 4;
/// Equal-cost pairs swapped per scenario.
pub const NEUTRALITY_PAIRS: usize = 8;

pub const AXIOM_ORDER: [&str; 6] = [
    COST_CONSISTENCY,
    SUPERSET_MONOTONICITY,
    POSITIVE_SYNERGY,
    NEGATIVE_SYNERGY,
    REGROUPING,
    NEUTRALITY,
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegroupingCase {
    pub set: Vec<String>,
    pub first: String,
    pub second: String,
}

/// Voter pairs with disjoint ballots and the sets straddling both ballots
/// that meet the regrouping preconditions, in voter then subset order.
pub fn regrouping_cases(scenario: &BudgetingScenario, cap: usize) -> Vec<RegroupingCase> {
    let ballots = scenario.ballots();
    let mut out = Vec::new();
    for i in 0..ballots.len() {
        for j in i + 1..ballots.len() {
            let (ai, aj) = (ballots[i].approvals, ballots[j].approvals);
            if ai.is_empty() || aj.is_empty() || !ai.is_disjoint(&aj) {
                continue;
            }
            let union = ai.union(&aj);
            for s in union.subsets_up_to(REGROUPING_SIZE) {
                let straddles = !s.is_subset(&ai) && !s.is_subset(&aj);
                let rest = union.difference(&s);
                if straddles
                    && scenario.set_cost(&s) <= scenario.budget()
                    && scenario.set_cost(&rest) <= scenario.budget()
                {
                    out.push(RegroupingCase {
                        set: scenario.ids_of(&s),
                        first: ballots[i].voter_id.clone(),
                        second: ballots[j].voter_id.clone(),
                    });
                    if out.len() == cap {
                        return out;
                    }
                }
            }
        }
    }
    out
}

fn first_failure(axiom: &str, universe: String, verdicts: Vec<AxiomVerdict>) -> AxiomVerdict {
    verdicts
        .into_iter()
        .find(|v| !v.holds)
        .unwrap_or_else(|| AxiomVerdict::pass(axiom, universe))
}

/// All six checks on one scenario, in [`AXIOM_ORDER`].
pub fn utility_suite(
    scenario: &BudgetingScenario,
    additivity: Additivity,
    seed: u64,
) -> Result<Vec<AxiomVerdict>, AxiomError> {
    let model = SynergyModel::build(scenario, additivity)?;
    utility_suite_with(&model, scenario, seed)
}

/// As [`utility_suite`] with a given model, so a corrupted model can be
/// checked. Regrouping and neutrality rebuild models from the scenario.
pub fn utility_suite_with(
    model: &SynergyModel,
    scenario: &BudgetingScenario,
    seed: u64,
) -> Result<Vec<AxiomVerdict>, AxiomError> {
    let additivity = model.additivity();
    let mut out = vec![
        check_cost_consistency(model, scenario)?,
        check_superset_monotonicity(model, scenario, additivity.limit().min(EAGER_SIZE_CAP), seed)?,
    ];
    let (positive, negative) = check_synergy_effects(model, scenario)?;
    out.push(positive);
    out.push(negative);

    let cases = regrouping_cases(scenario, REGROUPING_CASES);
    let verdicts = cases
        .iter()
        .map(|c| check_regrouping_monotonicity(scenario, additivity, &c.set, &c.first, &c.second))
        .collect::<Result<Vec<_>, _>>()?;
    out.push(first_failure(REGROUPING, format!("{} regrouping cases", cases.len()), verdicts));

    let n = scenario.num_projects();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .filter(|&(a, b)| scenario.cost(a) == scenario.cost(b))
        .take(NEUTRALITY_PAIRS)
        .collect();
    let id = |a: usize| scenario.ids_of(&ProjectSet::singleton(a)).remove(0);
    let verdicts = pairs
        .iter()
        .map(|&(a, b)| check_cost_aware_neutrality(scenario, additivity, &id(a), &id(b)))
        .collect::<Result<Vec<_>, _>>()?;
    out.push(first_failure(NEUTRALITY, format!("{} equal-cost swaps", pairs.len()), verdicts));
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct AxiomTally {
    pub axiom: String,
    pub checked: usize,
    pub failed: usize,
    /// First failing verdict and the index of its scenario.
    pub example: Option<(usize, AxiomVerdict)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BatchSummary {
    pub k: String,
    pub seed: u64,
    pub scenarios: usize,
    pub tallies: Vec<AxiomTally>,
}

impl BatchSummary {
    pub fn all_hold(&self) -> bool {
        self.tallies.iter().all(|t| t.failed == 0)
    }
}

/// Debugging control: the model with the first project's singleton
/// transform raised by one, which breaks cost consistency.
pub fn corrupt_model(model: &SynergyModel) -> SynergyModel {
    let first = ProjectSet::singleton(0);
    let value = model.transform_of(&first) + crate::rational(1, 1);
    model.with_transform_override(first, value)
}

/// Runs [`utility_suite`] over `count` random scenarios drawn from `seed`.
pub fn run_utility_batch(
    seed: u64,
    count: usize,
    shape: &RandomShape,
    additivity: Additivity,
) -> Result<BatchSummary, AxiomError> {
    run_utility_batch_with(seed, count, shape, additivity, false)
}

/// As [`run_utility_batch`], optionally on corrupted models (see [`corrupt_model`]).
pub fn run_utility_batch_with(
    seed: u64,
    count: usize,
    shape: &RandomShape,
    additivity: Additivity,
    corrupt: bool,
) -> Result<BatchSummary, AxiomError> {
    let mut tallies: Vec<AxiomTally> = AXIOM_ORDER
        .iter()
        .map(|a| AxiomTally {
            axiom: a.to_string(),
            checked: 0,
            failed: 0,
            example: None,
        })
        .collect();
    let batch = random_batch(seed, count, shape);
    for (i, scenario) in batch.iter().enumerate() {
        let mut model = SynergyModel::build(scenario, additivity)?;
        if corrupt {
            model = corrupt_model(&model);
        }
        let verdicts = utility_suite_with(&model, scenario, seed.wrapping_add(i as u64))?;
        for (tally, verdict) in tallies.iter_mut().zip(verdicts) {
            tally.checked += 1;
            if !verdict.holds {
                tally.failed += 1;
                tally.example.get_or_insert((i, verdict));
            }
        }
    }
    Ok(BatchSummary {
        k: additivity.to_string(),
        seed,
        scenarios: batch.len(),
        tallies,
    })
}
