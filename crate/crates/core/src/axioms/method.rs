use super::{AxiomError, AxiomVerdict, Witness};
use crate::scenario::{validate, BudgetingScenario, RawProject, ValidationPolicy};
use crate::set::ProjectSet;
use crate::solver::{branch_and_bound, branch_and_bound_with, Aggregator, SolveOptions};
use crate::synergy::{Additivity, SynergyModel};

pub const INCLUSION_MAXIMALITY: &str = "inclusion maximality";
pub const SPLITTING_MONOTONICITY: &str = "splitting monotonicity";

/// The winner leaves no unfunded project that fits the residual budget.
pub fn check_inclusion_maximality(
    model: &SynergyModel,
    scenario: &BudgetingScenario,
    alpha: Aggregator,
    options: SolveOptions,
) -> Result<AxiomVerdict, AxiomError> {
    let report = branch_and_bound_with(model, scenario, alpha, options)?;
    let residual = scenario.budget() - report.bundle.cost;
    let universe = format!("{alpha} winner, residual budget {residual}");
    let fits = (0..scenario.num_projects())
        .find(|&a| !report.bundle.contains(a) && scenario.cost(a) <= residual);
    Ok(match fits {
        None => AxiomVerdict::pass(INCLUSION_MAXIMALITY, universe),
        Some(a) => AxiomVerdict::fail(
            INCLUSION_MAXIMALITY,
            universe,
            Witness {
                sets: vec![report.ids.clone(), scenario.ids_of(&ProjectSet::singleton(a))],
                detail: format!("project costing {} still fits", scenario.cost(a)),
            },
        ),
    })
}

/// Splits the winning project `project` into parts with the given costs,
/// approved by exactly its approvers, and requires the new winner to fund at
/// least one part. Parts are named `<id>#1`, `<id>#2`, ...
pub fn check_splitting_monotonicity(
    scenario: &BudgetingScenario,
    alpha: Aggregator,
    additivity: Additivity,
    project: &str,
    parts: &[u64],
) -> Result<AxiomVerdict, AxiomError> {
    let index = scenario.index_of(project)?;
    let expected = scenario.cost(index);
    let got: u64 = parts.iter().sum();
    if got != expected || parts.contains(&0) {
        return Err(AxiomError::CostMismatch { expected, got });
    }
    let model = SynergyModel::build(scenario, additivity)?;
    let before = branch_and_bound(&model, scenario, alpha)?;
    if !before.bundle.contains(index) {
        return Err(AxiomError::Precondition(format!("`{project}` is not in the {alpha} winner")));
    }

    let names: Vec<String> = (1..=parts.len()).map(|i| format!("{project}#{i}")).collect();
    let mut raw = scenario.to_raw();
    raw.projects.retain(|p| p.id != project);
    for (name, &cost) in names.iter().zip(parts) {
        raw.projects.push(RawProject {
            id: name.clone(),
            label: String::new(),
            cost,
            extra: Default::default(),
            line: 0,
        });
    }
    for ballot in &mut raw.ballots {
        if let Some(pos) = ballot.approvals.iter().position(|id| id == project) {
            ballot.approvals.splice(pos..=pos, names.iter().cloned());
        }
    }
    let (split, _) = validate(raw, ValidationPolicy::Strict)?;
    let split_model = SynergyModel::build(&split, additivity)?;
    let after = branch_and_bound(&split_model, &split, alpha)?;
    let fragments = split.set_of(&names)?;
    let universe = format!("{alpha} winner after splitting {project} into {} parts", parts.len());
    if after.bundle.members.is_disjoint(&fragments) {
        Ok(AxiomVerdict::fail(
            SPLITTING_MONOTONICITY,
            universe,
            Witness {
                sets: vec![before.ids, after.ids, names],
                detail: "no fragment of the split project is funded".to_string(),
            },
        ))
    } else {
        Ok(AxiomVerdict::pass(SPLITTING_MONOTONICITY, universe))
    }
}
