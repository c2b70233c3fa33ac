use std::collections::HashMap;
use std::time::Instant;

use super::{beats, score_of, Aggregator, Bundle, Score, SearchStats, SolveError, SolveReport};
use crate::scenario::BudgetingScenario;
use crate::set::ProjectSet;
use crate::synergy::SynergyModel;
use crate::Rational;

pub const BRUTE_FORCE_MAX_PROJECTS: usize = 20;

/// Enumerates every feasible exhaustive bundle; the winner follows the same
/// tie-break as [`super::branch_and_bound`].
pub fn brute_force(
    model: &SynergyModel,
    scenario: &BudgetingScenario,
    alpha: Aggregator,
) -> Result<SolveReport, SolveError> {
    brute_force_with(model, scenario, alpha, true)
}

/// As [`brute_force`]; with `exhaustive` off every feasible bundle competes.
pub fn brute_force_with(
    model: &SynergyModel,
    scenario: &BudgetingScenario,
    alpha: Aggregator,
    exhaustive: bool,
) -> Result<SolveReport, SolveError> {
    model.check_bound_to(scenario)?;
    let n = scenario.num_projects();
    if n > BRUTE_FORCE_MAX_PROJECTS {
        return Err(SolveError::TooManyProjects {
            n,
            cap: BRUTE_FORCE_MAX_PROJECTS,
        });
    }
    let started = Instant::now();
    let costs: Vec<u64> = (0..n).map(|a| scenario.cost(a)).collect();
    let budget = scenario.budget();
    let mut memo: HashMap<ProjectSet, Rational> = HashMap::new();
    let mut best: Option<(Score, ProjectSet)> = None;
    let mut evaluated = 0u64;

    for mask in 0u64..(1u64 << n) {
        let cost: u64 = (0..n).filter(|a| mask >> a & 1 == 1).map(|a| costs[a]).sum();
        if cost > budget {
            continue;
        }
        let left = budget - cost;
        if exhaustive && (0..n).any(|a| mask >> a & 1 == 0 && costs[a] <= left) {
            continue;
        }
        let set = ProjectSet::from_mask(mask);
        evaluated += 1;
        let sats = scenario.ballots().iter().map(|b| {
            let part = b.approvals.intersection(&set);
            memo.entry(part)
                .or_insert_with(|| model.utility_of(&part))
                .clone()
        });
        let score = score_of(alpha, sats.collect::<Vec<_>>());
        if beats((&score, &set), best.as_ref().map(|(s, b)| (s, b))) {
            best = Some((score, set));
        }
    }
    let (score, set) = best.expect("the empty bundle or one of its fills is feasible");
    let bundle = Bundle::new(scenario, set);
    Ok(SolveReport {
        ids: bundle.ids(scenario),
        bundle,
        score,
        aggregator: alpha,
        additivity: model.additivity(),
        stats: SearchStats {
            nodes_explored: evaluated,
            ..SearchStats::default()
        },
        wall: started.elapsed(),
        optimal: true,
        trace: None,
    })
}
