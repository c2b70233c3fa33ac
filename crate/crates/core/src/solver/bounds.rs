use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::context::{Context, Scaled, State};
use super::{big, Aggregator, Score, SolveError};
use crate::scenario::BudgetingScenario;
use crate::set::ProjectSet;
use crate::synergy::SynergyModel;
use crate::Rational;

/// A node of the decision tree: projects decided in and out, and the budget left.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SearchNode {
    pub included: ProjectSet,
    pub banned: ProjectSet,
    pub remaining: u64,
}

impl SearchNode {
    pub fn root(scenario: &BudgetingScenario) -> Self {
        SearchNode {
            included: ProjectSet::EMPTY,
            banned: ProjectSet::EMPTY,
            remaining: scenario.budget(),
        }
    }

    /// Bundles below this node: supersets of `included` avoiding `banned` that fit.
    pub fn admits(&self, scenario: &BudgetingScenario, bundle: &ProjectSet) -> bool {
        self.included.is_subset(bundle)
            && bundle.is_disjoint(&self.banned)
            && scenario.set_cost(bundle) <= scenario.budget()
    }
}

impl Context {
    /// Fractional knapsack over undecided projects that still fit.
    fn relax(&self, st: &State, weights: &[i128], order: &[usize]) -> i128 {
        let mut left = st.remaining;
        let mut total = 0i128;
        for &a in order {
            let cost = self.costs[a];
            if !self.is_undecided(st, a) || cost > st.remaining {
                continue;
            }
            if cost <= left {
                total += weights[a];
                left -= cost;
            } else {
                let w = weights[a];
                total += Integer::div_ceil(&(w * left as i128), &(cost as i128));
                break;
            }
        }
        total
    }

    fn bound_sum(&self, st: &State) -> i128 {
        let apportioned: i128 = st.included.iter().map(|a| self.weight[a]).sum::<i128>()
            + self.relax(st, &self.weight, &self.by_density);
        let exact: i128 = self
            .groups
            .iter()
            .zip(&st.sats)
            .map(|(g, s)| s * g.count as i128)
            .sum();
        let anchored = exact + self.relax(st, &self.weight_full, &self.by_density_full);
        apportioned.min(anchored)
    }

    /// Optimistic satisfaction of each group below the node.
    fn optimistic(&self, st: &State) -> Vec<i128> {
        self.groups
            .iter()
            .zip(&st.sats)
            .map(|(g, &sat)| {
                let mut open = g.ballot.intersection(&st.included);
                let fixed = open;
                for a in g.ballot.iter() {
                    if self.is_undecided(st, a) && self.costs[a] <= st.remaining {
                        open.insert(a);
                    }
                }
                if open == fixed {
                    return sat;
                }
                let mut gain = 0i128;
                let mut whole = 0i128;
                for (c, m) in &g.entries {
                    if c.is_subset(&open) {
                        whole += m;
                        if !c.is_subset(&fixed) && *m > 0 {
                            gain += m;
                        }
                    }
                }
                // u(open) dominates its subsets only up to the additivity bound
                if open.len() <= self.limit {
                    whole.min(sat + gain)
                } else {
                    sat + gain
                }
            })
            .collect()
    }

    /// Upper bound on the score of every bundle below the node.
    pub fn bound(&self, st: &State) -> Scaled {
        match self.alpha {
            Aggregator::Sum => Scaled::Sum(self.bound_sum(st)),
            _ => self.score(&self.optimistic(st)),
        }
    }
}

/// Upper bound on the Sum score of every feasible completion of the node.
pub fn upper_bound_sum(
    model: &SynergyModel,
    scenario: &BudgetingScenario,
    node: &SearchNode,
) -> Result<Score, SolveError> {
    let ctx = Context::new(model, scenario, Aggregator::Sum)?;
    let st = node_state(&ctx, node)?;
    Ok(ctx.to_score(&ctx.bound(&st)))
}

/// Upper bound on the Min or Product score of every feasible completion.
/// With `Sum` it returns the Min bound.
pub fn upper_bound_min_prod(
    model: &SynergyModel,
    scenario: &BudgetingScenario,
    node: &SearchNode,
    alpha: Aggregator,
) -> Result<Score, SolveError> {
    let alpha = if alpha == Aggregator::Sum { Aggregator::Min } else { alpha };
    let ctx = Context::new(model, scenario, alpha)?;
    let st = node_state(&ctx, node)?;
    Ok(ctx.to_score(&ctx.bound(&st)))
}

fn node_state(ctx: &Context, node: &SearchNode) -> Result<State, SolveError> {
    let cost: u64 = node.included.iter().map(|a| ctx.costs[a]).sum();
    if cost > ctx.budget {
        return Err(SolveError::Infeasible {
            cost,
            budget: ctx.budget,
        });
    }
    let mut st = ctx.state_of(&node.included, &node.banned.difference(&node.included));
    st.remaining = st.remaining.min(node.remaining);
    Ok(st)
}

/// `cost(a)` plus, for every ballot-contained set `C ∋ a` within the
/// additivity bound whose transform is positive, `m(C) / |C|`.
pub fn per_project_utility_cap(
    model: &SynergyModel,
    scenario: &BudgetingScenario,
    project: usize,
) -> Result<Rational, SolveError> {
    model.check_bound_to(scenario)?;
    let limit = model.additivity().limit();
    let mut seen: HashSet<ProjectSet> = HashSet::new();
    let mut cap = Rational::from_integer(big(scenario.cost(project)));
    for b in scenario.ballots() {
        if !b.approvals.contains(project) {
            continue;
        }
        let others = b.approvals.without(project);
        for c in others.subsets_up_to(limit.saturating_sub(1)) {
            let c = c.with(project);
            if scenario.set_cost(&c) > scenario.budget() || !seen.insert(c) {
                continue;
            }
            let m = model.transform_of(&c);
            if m > Rational::zero() {
                cap += m / Rational::from_integer(BigInt::from(c.len()));
            }
        }
    }
    Ok(cap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational;
    use crate::scenario::tests::example_one;
    use crate::synergy::Additivity;

    #[test]
    fn cap_of_project_a() {
        let s = example_one();
        let m = SynergyModel::build(&s, Additivity::Bounded(2)).unwrap();
        let cap = per_project_utility_cap(&m, &s, 0).unwrap();
        let positive_pairs: Rational = [1usize, 3, 4, 2]
            .iter()
            .map(|&b| m.transform_of(&ProjectSet::singleton(0).with(b)))
            .filter(|t| *t > Rational::zero())
            .map(|t| t / rational(2, 1))
            .sum();
        assert_eq!(cap, rational(2, 1) + positive_pairs);
        assert_eq!(cap, rational(2, 1) + rational(15, 32) + rational(3, 16));

        let m1 = SynergyModel::build(&s, Additivity::Bounded(1)).unwrap();
        for a in 0..5 {
            assert_eq!(
                per_project_utility_cap(&m1, &s, a).unwrap(),
                Rational::from_integer(big(s.cost(a)))
            );
        }
    }

    #[test]
    fn root_bound_for_min_is_favourite_sets() {
        let s = example_one();
        let m = SynergyModel::build(&s, Additivity::Bounded(2)).unwrap();
        let root = SearchNode::root(&s);
        let favourite = s
            .ballots()
            .iter()
            .map(|b| m.utility_of(&b.approvals))
            .min()
            .unwrap();
        let b = upper_bound_min_prod(&m, &s, &root, Aggregator::Min).unwrap();
        assert!(b >= Score::Min(favourite.clone()));
    }

    #[test]
    fn starved_voter_and_exhausted_budget() {
        let s = example_one();
        let m = SynergyModel::build(&s, Additivity::Bounded(2)).unwrap();
        // voter 3 approves only C and E
        let node = SearchNode {
            included: ProjectSet::EMPTY,
            banned: s.set_of(&["C", "E"]).unwrap(),
            remaining: 9,
        };
        assert_eq!(
            upper_bound_min_prod(&m, &s, &node, Aggregator::Min).unwrap(),
            Score::Min(Rational::zero())
        );
        let full = s.set_of(&["A", "B", "C", "E"]).unwrap();
        let node = SearchNode {
            included: full,
            banned: ProjectSet::EMPTY,
            remaining: 0,
        };
        let bundle = super::super::Bundle::new(&s, full);
        for alpha in Aggregator::ALL {
            let exact = super::super::aggregate(&m, &s, &bundle, alpha).unwrap();
            let bound = match alpha {
                Aggregator::Sum => upper_bound_sum(&m, &s, &node).unwrap(),
                _ => upper_bound_min_prod(&m, &s, &node, alpha).unwrap(),
            };
            assert_eq!(bound, exact, "{alpha}");
        }
    }

    #[test]
    fn single_item_relaxation() {
        let raw = crate::scenario::RawScenario::from_parts(5, [("p", 3)], [("v", vec!["p"])]);
        let (s, _) = crate::scenario::validate(raw, crate::scenario::ValidationPolicy::Strict).unwrap();
        let m = SynergyModel::build(&s, Additivity::Bounded(2)).unwrap();
        let b = upper_bound_sum(&m, &s, &SearchNode::root(&s)).unwrap();
        assert_eq!(b, Score::Sum(rational(3, 1)));
    }
}
