use std::cmp::Ordering;
use std::time::Instant;

use super::bounds::SearchNode;
use super::context::{Context, Scaled, State};
use super::{
    beats, Aggregator, Bundle, SearchStats, SearchTrace, SolveError, SolveOptions, SolveReport,
    TracedBound,
};
use crate::scenario::BudgetingScenario;
use crate::set::ProjectSet;
use crate::synergy::SynergyModel;

struct Search<'c> {
    ctx: &'c Context,
    options: SolveOptions,
    stats: SearchStats,
    best: Option<(Scaled, ProjectSet)>,
    trace: Option<SearchTrace>,
    started: Instant,
    stopped: bool,
}

impl Search<'_> {
    fn offer(&mut self, score: Scaled, set: ProjectSet) {
        if beats((&score, &set), self.best.as_ref().map(|(s, b)| (s, b))) {
            if let Some(trace) = &mut self.trace {
                trace.incumbents.push(self.ctx.to_score(&score));
            }
            self.best = Some((score, set));
        }
    }

    fn out_of_limits(&mut self) -> bool {
        let limits = self.options.limits;
        if limits.max_nodes.is_some_and(|max| self.stats.nodes_explored > max) {
            self.stopped = true;
        }
        if let Some(timeout) = limits.timeout {
            if self.stats.nodes_explored.is_multiple_of(64) && self.started.elapsed() >= timeout {
                self.stopped = true;
            }
        }
        self.stopped
    }

    /// Whether some bundle below the node could precede `incumbent` in
    /// lexicographic order. Scans project indices upward while membership is
    /// forced to agree with the incumbent.
    fn may_precede(&self, st: &State, incumbent: &ProjectSet) -> bool {
        let top_included = st.included.iter().last();
        for e in 0..self.ctx.n {
            let forced = if st.included.contains(e) {
                Some(true)
            } else if st.banned.contains(e) || self.ctx.costs[e] > st.remaining {
                Some(false)
            } else {
                None
            };
            let in_incumbent = incumbent.contains(e);
            match forced {
                Some(f) if f == in_incumbent => continue,
                None => return true,
                // the bundle holds e where the incumbent moves on to a larger element
                Some(true) => return incumbent.iter().any(|x| x > e),
                // the bundle skips e; it precedes only as a proper prefix
                Some(false) => return top_included.is_none_or(|t| t < e),
            }
        }
        false
    }

    fn dfs(&mut self, mut st: State, mut depth: usize) {
        if self.stopped {
            return;
        }
        self.stats.nodes_explored += 1;
        if self.out_of_limits() {
            return;
        }
        let n = self.ctx.n;
        while depth < n && self.ctx.costs[self.ctx.order[depth]] > st.remaining {
            st.banned.insert(self.ctx.order[depth]);
            self.stats.nodes_pruned_budget += 1;
            depth += 1;
        }
        if depth == n {
            if !self.options.exhaustive || self.ctx.is_exhaustive(&st) {
                let score = self.ctx.score(&st.sats);
                self.offer(score, st.included);
            }
            return;
        }

        let mut greedy = st.clone();
        self.ctx.complete(&mut greedy, self.options.exhaustive);
        let score = self.ctx.score(&greedy.sats);
        self.offer(score, greedy.included);

        self.stats.bound_evals += 1;
        let bound = self.ctx.bound(&st);
        if let Some(trace) = &mut self.trace {
            trace.bounds.push(TracedBound {
                node: SearchNode {
                    included: st.included,
                    banned: st.banned,
                    remaining: st.remaining,
                },
                bound: self.ctx.to_score(&bound),
            });
        }
        let (best, incumbent) = self.best.as_ref().expect("incumbent set above");
        let prune = match bound.cmp(best) {
            Ordering::Less => true,
            Ordering::Equal => !self.may_precede(&st, incumbent),
            Ordering::Greater => false,
        };
        if prune {
            self.stats.nodes_pruned_bound += 1;
            return;
        }

        let a = self.ctx.order[depth];
        let mut with = st.clone();
        self.ctx.include(&mut with, a);
        self.dfs(with, depth + 1);
        st.banned.insert(a);
        self.dfs(st, depth + 1);
    }
}

/// Exact winner by depth-first branch and bound with default options.
pub fn branch_and_bound(
    model: &SynergyModel,
    scenario: &BudgetingScenario,
    alpha: Aggregator,
) -> Result<SolveReport, SolveError> {
    branch_and_bound_with(model, scenario, alpha, SolveOptions::default())
}

/// Branch and bound over include/ban decisions in decreasing approval order.
///
/// The winner is the lexicographically smallest exhaustive bundle of maximal
/// score. When a node or time limit stops the search early the best bundle
/// found so far is returned and `optimal` is false.
pub fn branch_and_bound_with(
    model: &SynergyModel,
    scenario: &BudgetingScenario,
    alpha: Aggregator,
    options: SolveOptions,
) -> Result<SolveReport, SolveError> {
    let started = Instant::now();
    let ctx = Context::new(model, scenario, alpha)?;
    let mut search = Search {
        ctx: &ctx,
        options,
        stats: SearchStats::default(),
        best: None,
        trace: options.trace.then(SearchTrace::default),
        started,
        stopped: false,
    };
    search.dfs(ctx.root(), 0);
    if search.best.is_none() {
        // a limit stopped the search before the root incumbent
        let mut st = ctx.root();
        ctx.complete(&mut st, options.exhaustive);
        let score = ctx.score(&st.sats);
        search.offer(score, st.included);
    }
    let (score, set) = search.best.take().expect("incumbent exists");
    let bundle = Bundle::new(scenario, set);
    Ok(SolveReport {
        ids: bundle.ids(scenario),
        bundle,
        score: ctx.to_score(&score),
        aggregator: alpha,
        additivity: model.additivity(),
        stats: search.stats,
        wall: started.elapsed(),
        optimal: !search.stopped,
        trace: search.trace,
    })
}
