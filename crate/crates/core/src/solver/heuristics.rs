use super::context::{Context, State};
use super::{Aggregator, Bundle, SolveError};
use crate::scenario::BudgetingScenario;
use crate::synergy::SynergyModel;

impl Context {
    /// Adds every project outside the bundle that still fits, by approval order.
    pub fn fill(&self, st: &mut State) {
        for &a in &self.order {
            if !st.included.contains(a) && self.costs[a] <= st.remaining {
                self.include(st, a);
            }
        }
    }

    /// Undecided projects by approval order, then a global fill when `exhaustive`.
    pub fn complete_by_approvals(&self, st: &mut State, exhaustive: bool) {
        for &a in &self.order {
            if self.is_undecided(st, a) && self.costs[a] <= st.remaining {
                self.include(st, a);
            }
        }
        if exhaustive {
            self.fill(st);
        }
    }

    /// Repeatedly funds the undecided project approved by most of the least
    /// satisfied voters, then completes by approval order.
    pub fn complete_least_satisfied(&self, st: &mut State, exhaustive: bool) {
        loop {
            let least = self.least_satisfied(&st.sats);
            let mut best: Option<(u64, usize, usize)> = None;
            for a in 0..self.n {
                if !self.is_undecided(st, a) || self.costs[a] > st.remaining {
                    continue;
                }
                let reach: u64 = self.groups_of[a]
                    .iter()
                    .filter(|&&g| least[g])
                    .map(|&g| self.groups[g].count)
                    .sum();
                if reach == 0 {
                    continue;
                }
                let better = match best {
                    None => true,
                    Some((r, approvals, _)) => (reach, self.approvals[a]) > (r, approvals),
                };
                if better {
                    best = Some((reach, self.approvals[a], a));
                }
            }
            match best {
                Some((_, _, a)) => self.include(st, a),
                None => break,
            }
        }
        self.complete_by_approvals(st, exhaustive);
    }

    fn least_satisfied(&self, sats: &[i128]) -> Vec<bool> {
        if self.alpha == Aggregator::Product && sats.iter().any(|&s| s <= 0) {
            return sats.iter().map(|&s| s <= 0).collect();
        }
        let min = sats.iter().copied().min().unwrap_or(0);
        sats.iter().map(|&s| s == min).collect()
    }

    /// The aggregator's heuristic completion of a node.
    pub fn complete(&self, st: &mut State, exhaustive: bool) {
        match self.alpha {
            Aggregator::Sum => self.complete_by_approvals(st, exhaustive),
            Aggregator::Min | Aggregator::Product => self.complete_least_satisfied(st, exhaustive),
        }
    }
}

/// Adds projects outside the bundle by decreasing approval count (ties by
/// id) while they fit; the result admits no further addition.
pub fn exhaustive_fill(scenario: &BudgetingScenario, bundle: &Bundle) -> Bundle {
    let mut members = bundle.members;
    let mut left = scenario.budget().saturating_sub(bundle.cost);
    for a in scenario.approval_order() {
        if !members.contains(a) && scenario.cost(a) <= left {
            members.insert(a);
            left -= scenario.cost(a);
        }
    }
    Bundle::new(scenario, members)
}

/// Funds projects by decreasing approval count while they fit.
pub fn greedy_by_approvals(scenario: &BudgetingScenario) -> Bundle {
    exhaustive_fill(scenario, &Bundle::empty())
}

/// Greedy for the egalitarian aggregators: fund what the least satisfied
/// voters want most. With `Sum` it behaves as for `Min`.
pub fn greedy_min_prod(
    model: &SynergyModel,
    scenario: &BudgetingScenario,
    alpha: Aggregator,
) -> Result<Bundle, SolveError> {
    let alpha = if alpha == Aggregator::Sum { Aggregator::Min } else { alpha };
    let ctx = Context::new(model, scenario, alpha)?;
    let mut st = ctx.root();
    ctx.complete_least_satisfied(&mut st, true);
    Ok(Bundle::new(scenario, st.included))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::tests::example_one;
    use crate::scenario::{validate, RawScenario, ValidationPolicy};
    use crate::synergy::Additivity;

    fn scenario(budget: u64, projects: &[(&str, u64)], ballots: &[(&str, Vec<&str>)]) -> BudgetingScenario {
        let raw = RawScenario::from_parts(budget, projects.to_vec(), ballots.to_vec());
        validate(raw, ValidationPolicy::Strict).unwrap().0
    }

    #[test]
    fn greedy_on_example_one() {
        let s = example_one();
        assert_eq!(greedy_by_approvals(&s).ids(&s), ["A", "B", "C", "D"]);
    }

    #[test]
    fn greedy_edge_cases() {
        let s = scenario(3, &[("x", 5)], &[("v", vec![])]);
        assert!(greedy_by_approvals(&s).members.is_empty());
        let s = scenario(10, &[("x", 2), ("y", 3)], &[("v", vec!["x"])]);
        assert_eq!(greedy_by_approvals(&s).ids(&s), ["x", "y"]);
    }

    #[test]
    fn fill_examples() {
        let s = example_one();
        let e = Bundle::from_ids(&s, &["E"]).unwrap();
        assert_eq!(exhaustive_fill(&s, &e).ids(&s), ["A", "B", "C", "E"]);
        let full = greedy_by_approvals(&s);
        assert_eq!(exhaustive_fill(&s, &full), full);
        assert_eq!(exhaustive_fill(&s, &Bundle::empty()), full);
    }

    #[test]
    fn least_satisfied_greedy() {
        let s = example_one();
        let m = SynergyModel::build(&s, Additivity::Bounded(2)).unwrap();
        let b = greedy_min_prod(&m, &s, Aggregator::Min).unwrap();
        assert!(b.contains(0), "first pick is A");
        assert!(b.is_feasible(&s) && b.is_exhaustive(&s));

        // one voter: her ballot by approval order
        let s = scenario(5, &[("a", 3), ("b", 2), ("c", 4)], &[("v", vec!["a", "b"])]);
        let m = SynergyModel::build(&s, Additivity::Bounded(2)).unwrap();
        assert_eq!(greedy_min_prod(&m, &s, Aggregator::Product).unwrap().ids(&s), ["a", "b"]);

        // identical ballots: picks from the common ballot first
        let s = scenario(
            4,
            &[("a", 2), ("b", 2), ("c", 1)],
            &[("1", vec!["b", "c"]), ("2", vec!["b", "c"])],
        );
        let m = SynergyModel::build(&s, Additivity::Bounded(2)).unwrap();
        let b = greedy_min_prod(&m, &s, Aggregator::Min).unwrap();
        assert!(b.contains(1) && b.contains(2));
    }
}
