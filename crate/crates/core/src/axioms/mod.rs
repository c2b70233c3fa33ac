//! Executable checks of the utility-function axioms and the budgeting-method
//! axioms, and the counterexample fixtures for the monotonicity axioms.

mod fixtures;
mod method;
mod suite;

use std::collections::HashMap;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::scenario::{validate, BudgetingScenario, RawBallot, ScenarioError, ValidationError, ValidationPolicy};
use crate::set::ProjectSet;
use crate::solver::SolveError;
use crate::synergy::{Additivity, ModelError, SynergyModel, EAGER_SIZE_CAP};
use crate::Rational;

pub use fixtures::{
    discount_fixture, limit_fixture_min_prod, limit_fixture_sum, merging_fixture_min_prod,
    merging_fixture_sum, merging_gain, run_counterexample_fixtures, smallest_merging_faction,
    FixtureReport, DISCOUNT_MONOTONICITY, FIXTURE_ADDITIVITY, LIMIT_MONOTONICITY,
    MERGING_MONOTONICITY, MERGING_SUM_FACTION,
};
pub use method::{
    check_inclusion_maximality, check_splitting_monotonicity, INCLUSION_MAXIMALITY,
    SPLITTING_MONOTONICITY,
};
pub use suite::{
    corrupt_model, utility_suite, utility_suite_with, regrouping_cases, run_utility_batch,
    run_utility_batch_with, AxiomTally, BatchSummary, RegroupingCase, AXIOM_ORDER,
};

/// Scenarios with at most this many projects have every subset checked.
pub const EXHAUSTIVE_PROJECTS: usize = 10;
/// Random subsets drawn for larger scenarios.
pub const RANDOM_SUBSETS: usize = 1000;
/// Largest subset enumerated by the synergy-effect checks.
pub const SYNERGY_SIZE_CAP: usize = EAGER_SIZE_CAP;
/// Cap on enumerated sets per check.
pub const ENUMERATION_CAP: usize = 200_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub sets: Vec<Vec<String>>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomVerdict {
    pub axiom: String,
    pub holds: bool,
    /// Present exactly when the axiom fails.
    pub witness: Option<Witness>,
    pub universe: String,
}

impl AxiomVerdict {
    pub fn pass(axiom: &str, universe: impl Into<String>) -> Self {
        AxiomVerdict {
            axiom: axiom.to_string(),
            holds: true,
            witness: None,
            universe: universe.into(),
        }
    }

    pub fn fail(axiom: &str, universe: impl Into<String>, witness: Witness) -> Self {
        AxiomVerdict {
            axiom: axiom.to_string(),
            holds: false,
            witness: Some(witness),
            universe: universe.into(),
        }
    }
}

#[derive(Debug, Error)]
pub enum AxiomError {
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("projects `{a}` and `{b}` have different costs ({ca} and {cb})")]
    UnequalCosts { a: String, b: String, ca: u64, cb: u64 },
    #[error("split parts cost {got}, expected {expected}")]
    CostMismatch { expected: u64, got: u64 },
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error(transparent)]
    Validation(#[from] ValidationError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Solve(#[from] SolveError),
}

pub const COST_CONSISTENCY: &str = "cost consistency";
pub const SUPERSET_MONOTONICITY: &str = "super-set monotonicity";
pub const POSITIVE_SYNERGY: &str = "positive synergies";
pub const NEGATIVE_SYNERGY: &str = "negative synergies";
pub const REGROUPING: &str = "regrouping monotonicity";
pub const NEUTRALITY: &str = "cost-aware neutrality";

fn integer(n: u64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `u_M({a}) = cost(a)` for every project.
pub fn check_cost_consistency(model: &SynergyModel, scenario: &BudgetingScenario) -> Result<AxiomVerdict, AxiomError> {
    model.check_bound_to(scenario)?;
    let universe = format!("{} singletons", scenario.num_projects());
    for a in 0..scenario.num_projects() {
        let u = model.utility_of(&ProjectSet::singleton(a));
        if u != integer(scenario.cost(a)) {
            return Ok(AxiomVerdict::fail(
                COST_CONSISTENCY,
                universe,
                Witness {
                    sets: vec![vec![scenario.projects()[a].id.clone()]],
                    detail: format!("u = {u}, cost = {}", scenario.cost(a)),
                },
            ));
        }
    }
    Ok(AxiomVerdict::pass(COST_CONSISTENCY, universe))
}

struct Utilities<'m> {
    model: &'m SynergyModel,
    memo: HashMap<ProjectSet, Rational>,
}

impl<'m> Utilities<'m> {
    fn new(model: &'m SynergyModel) -> Self {
        Utilities {
            model,
            memo: HashMap::new(),
        }
    }

    fn get(&mut self, set: &ProjectSet) -> Rational {
        if let Some(u) = self.memo.get(set) {
            return u.clone();
        }
        let u = self.model.utility_of(set);
        self.memo.insert(*set, u.clone());
        u
    }
}

fn ballot_subsets(scenario: &BudgetingScenario, max_size: usize) -> Vec<ProjectSet> {
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for b in scenario.ballots() {
        for s in b.approvals.subsets_up_to(max_size) {
            if seen.insert(s) {
                out.push(s);
            }
        }
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then(a.lex_cmp(b)));
    out
}

/// `u_M(S ∖ {a}) ≤ u_M(S)` for every checked `S` and `a ∈ S`.
///
/// Checks every ballot-contained set of size at most `max_size` (capped at
/// the eager size), then every subset when the scenario has at most
/// [`EXHAUSTIVE_PROJECTS`] projects, else [`RANDOM_SUBSETS`] random ones.
pub fn check_superset_monotonicity(
    model: &SynergyModel,
    scenario: &BudgetingScenario,
    max_size: usize,
    seed: u64,
) -> Result<AxiomVerdict, AxiomError> {
    model.check_bound_to(scenario)?;
    let n = scenario.num_projects();
    let size = max_size.min(EAGER_SIZE_CAP);
    let mut candidates = ballot_subsets(scenario, size);
    let universe = if n <= EXHAUSTIVE_PROJECTS {
        candidates.extend((1u64..(1 << n)).map(ProjectSet::from_mask));
        format!("ballot subsets up to size {size}; all {} subsets", 1u64 << n)
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..RANDOM_SUBSETS {
            let len = rng.gen_range(1..=n.min(EXHAUSTIVE_PROJECTS));
            let picked = rand::seq::index::sample(&mut rng, n, len);
            candidates.push(picked.into_iter().collect());
        }
        format!("ballot subsets up to size {size}; {RANDOM_SUBSETS} random subsets (seed {seed})")
    };
    let mut u = Utilities::new(model);
    for s in &candidates {
        let whole = u.get(s);
        for a in s.iter() {
            let part = u.get(&s.without(a));
            if part > whole {
                return Ok(AxiomVerdict::fail(
                    SUPERSET_MONOTONICITY,
                    universe,
                    Witness {
                        sets: vec![scenario.ids_of(s), scenario.ids_of(&ProjectSet::singleton(a))],
                        detail: format!("u(S) = {whole} < u(S - a) = {part}"),
                    },
                ));
            }
        }
    }
    Ok(AxiomVerdict::pass(SUPERSET_MONOTONICITY, universe))
}

/// Whether each voter approves all of `set` or none of it.
fn is_block(scenario: &BudgetingScenario, set: &ProjectSet) -> bool {
    scenario.ballots().iter().all(|b| {
        let common = b.approvals.intersection(set);
        common.is_empty() || common == *set
    })
}

/// Sets of 2..=`max_size` projects no two of which share a ballot.
fn never_together(scenario: &BudgetingScenario, max_size: usize) -> (Vec<ProjectSet>, bool) {
    let n = scenario.num_projects();
    let mut apart = vec![ProjectSet::full(n); n];
    for b in scenario.ballots() {
        for a in b.approvals.iter() {
            apart[a] = apart[a].difference(&b.approvals);
        }
    }
    let mut out = Vec::new();
    let mut truncated = false;
    let mut stack: Vec<(ProjectSet, ProjectSet)> = (0..n)
        .rev()
        .map(|a| {
            let later = apart[a].iter().filter(|&b| b > a).collect();
            (ProjectSet::singleton(a), later)
        })
        .collect();
    while let Some((set, open)) = stack.pop() {
        if set.len() >= 2 {
            if out.len() == ENUMERATION_CAP {
                truncated = true;
                break;
            }
            out.push(set);
        }
        if set.len() == max_size {
            continue;
        }
        for b in open.iter().collect::<Vec<_>>().into_iter().rev() {
            let later: ProjectSet = open.intersection(&apart[b]).iter().filter(|&c| c > b).collect();
            stack.push((set.with(b), later));
        }
    }
    (out, truncated)
}

/// The positive and negative synergy effects.
///
/// Positive: every block-approved set `S` (each voter approves all of it or
/// none, someone approves it) with `|S| ≥ 2` has `u_M(S) ≥ cost(S)`, strictly
/// when some voter approves none of `S`. Negative: every set whose members
/// never share a ballot has `u_M(S) ≤ cost(S)`. Sets of size 2 to
/// [`SYNERGY_SIZE_CAP`] are enumerated.
pub fn check_synergy_effects(
    model: &SynergyModel,
    scenario: &BudgetingScenario,
) -> Result<(AxiomVerdict, AxiomVerdict), AxiomError> {
    model.check_bound_to(scenario)?;
    let size = SYNERGY_SIZE_CAP.min(scenario.num_projects());
    let mut u = Utilities::new(model);

    let blocks: Vec<ProjectSet> = ballot_subsets(scenario, size)
        .into_iter()
        .filter(|s| s.len() >= 2 && is_block(scenario, s))
        .collect();
    let universe = format!("{} block-approved sets of size 2..={size}", blocks.len());
    let mut positive = AxiomVerdict::pass(POSITIVE_SYNERGY, universe.clone());
    for s in &blocks {
        let value = u.get(s);
        let cost = integer(scenario.set_cost(s));
        let strict = model.approvals_of(s) < scenario.num_voters();
        let ok = if strict { value > cost } else { value >= cost };
        if !ok {
            let relation = if strict { ">" } else { ">=" };
            positive = AxiomVerdict::fail(
                POSITIVE_SYNERGY,
                universe,
                Witness {
                    sets: vec![scenario.ids_of(s)],
                    detail: format!("expected u(S) = {value} {relation} cost(S) = {cost}"),
                },
            );
            break;
        }
    }

    let (apart, truncated) = never_together(scenario, size);
    let universe = format!(
        "{}{} never-together sets of size 2..={size}",
        if truncated { "first " } else { "" },
        apart.len()
    );
    let mut negative = AxiomVerdict::pass(NEGATIVE_SYNERGY, universe.clone());
    for s in &apart {
        let value = u.get(s);
        let cost = integer(scenario.set_cost(s));
        if value > cost {
            negative = AxiomVerdict::fail(
                NEGATIVE_SYNERGY,
                universe,
                Witness {
                    sets: vec![scenario.ids_of(s)],
                    detail: format!("u(S) = {value} > cost(S) = {cost}"),
                },
            );
            break;
        }
    }
    Ok((positive, negative))
}

/// Replaces voters `vi` and `vj` by one voter approving `set` and one
/// approving the rest of their ballots, then requires `u_M(S)` to rise
/// strictly.
pub fn check_regrouping_monotonicity<S: AsRef<str>>(
    scenario: &BudgetingScenario,
    additivity: Additivity,
    set: &[S],
    vi: &str,
    vj: &str,
) -> Result<AxiomVerdict, AxiomError> {
    regrouping_with(scenario, set, vi, vj, &|e| SynergyModel::lazy(e, additivity))
}

type ModelBuilder<'a> = &'a dyn Fn(&BudgetingScenario) -> Result<SynergyModel, ModelError>;

pub(crate) fn regrouping_with<S: AsRef<str>>(
    scenario: &BudgetingScenario,
    set: &[S],
    vi: &str,
    vj: &str,
    build: ModelBuilder,
) -> Result<AxiomVerdict, AxiomError> {
    let s = scenario.set_of(set)?;
    let i = scenario.voter_index(vi)?;
    let j = scenario.voter_index(vj)?;
    let ai = scenario.ballots()[i].approvals;
    let aj = scenario.ballots()[j].approvals;
    let union = ai.union(&aj);
    let fail = |msg: &str| Err(AxiomError::Precondition(msg.to_string()));
    if i == j {
        return fail("the two voters must differ");
    }
    if !ai.is_disjoint(&aj) {
        return fail("the two ballots overlap");
    }
    if !s.is_subset(&union) {
        return fail("S is not covered by the two ballots");
    }
    if s.is_subset(&ai) || s.is_subset(&aj) {
        return fail("S lies inside one ballot");
    }
    if scenario.set_cost(&s) > scenario.budget() {
        return fail("S costs more than the budget");
    }
    let rest = union.difference(&s);
    if scenario.set_cost(&rest) > scenario.budget() {
        return fail("the remaining approvals cost more than the budget");
    }

    let mut raw = scenario.to_raw();
    raw.ballots.retain(|b| b.voter_id != vi && b.voter_id != vj);
    for (suffix, part) in [("grouped", s), ("rest", rest)] {
        raw.ballots.push(RawBallot {
            voter_id: format!("{vi}+{vj}:{suffix}"),
            approvals: scenario.ids_of(&part),
            extra: Default::default(),
            line: 0,
        });
    }
    let (regrouped, _) = validate(raw, ValidationPolicy::Strict)?;
    let before = build(scenario)?.utility_of(&s);
    let after = build(&regrouped)?.utility_of(&regrouped.set_of(&scenario.ids_of(&s))?);
    let universe = format!("S = {{{}}}, voters {vi} and {vj}", scenario.ids_of(&s).join(","));
    if before < after {
        Ok(AxiomVerdict::pass(REGROUPING, universe))
    } else {
        Ok(AxiomVerdict::fail(
            REGROUPING,
            universe,
            Witness {
                sets: vec![scenario.ids_of(&s), scenario.ids_of(&ai), scenario.ids_of(&aj)],
                detail: format!("u(S, E) = {before}, u(S, E') = {after}"),
            },
        ))
    }
}

/// Swaps the approvals of two equal-cost projects and requires every
/// ballot-contained set up to the additivity bound (capped at the eager size)
/// to keep its utility under the relabelling.
pub fn check_cost_aware_neutrality(
    scenario: &BudgetingScenario,
    additivity: Additivity,
    a: &str,
    b: &str,
) -> Result<AxiomVerdict, AxiomError> {
    let size = additivity.limit().min(EAGER_SIZE_CAP);
    neutrality_with(scenario, a, b, size, &|e| SynergyModel::build(e, additivity))
}

pub(crate) fn neutrality_with(
    scenario: &BudgetingScenario,
    a: &str,
    b: &str,
    size: usize,
    build: ModelBuilder,
) -> Result<AxiomVerdict, AxiomError> {
    let ia = scenario.index_of(a)?;
    let ib = scenario.index_of(b)?;
    let (ca, cb) = (scenario.cost(ia), scenario.cost(ib));
    if ca != cb {
        return Err(AxiomError::UnequalCosts {
            a: a.to_string(),
            b: b.to_string(),
            ca,
            cb,
        });
    }
    let swap_id = |id: &str| -> String {
        if id == a {
            b.to_string()
        } else if id == b {
            a.to_string()
        } else {
            id.to_string()
        }
    };
    let mut raw = scenario.to_raw();
    for ballot in &mut raw.ballots {
        ballot.approvals = ballot.approvals.iter().map(|id| swap_id(id)).collect();
    }
    let (swapped, _) = validate(raw, ValidationPolicy::Strict)?;
    let swap_set = |s: &ProjectSet| -> ProjectSet {
        s.iter()
            .map(|x| if x == ia { ib } else if x == ib { ia } else { x })
            .collect()
    };
    let original = build(scenario)?;
    let relabelled = build(&swapped)?;
    let sets = ballot_subsets(scenario, size);
    let universe = format!("{} ballot subsets up to size {size}, swap {a} and {b}", sets.len());
    for s in &sets {
        let before = original.utility_of(s);
        let after = relabelled.utility_of(&swap_set(s));
        if before != after {
            return Ok(AxiomVerdict::fail(
                NEUTRALITY,
                universe,
                Witness {
                    sets: vec![scenario.ids_of(s), scenario.ids_of(&swap_set(s))],
                    detail: format!("u(S, E) = {before}, u(S', E') = {after}"),
                },
            ));
        }
    }
    Ok(AxiomVerdict::pass(NEUTRALITY, universe))
}

#[cfg(test)]
mod tests;
