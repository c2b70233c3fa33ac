//! Integer view of a model for the search: every transform that can reach a
//! satisfaction is scaled to a common denominator, and voters with identical
//! ballots are merged into weighted groups.

use std::cmp::Ordering;
use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, ToPrimitive, Zero};

use super::{Aggregator, Score, SolveError};
use crate::scenario::BudgetingScenario;
use crate::set::ProjectSet;
use crate::synergy::SynergyModel;
use crate::Rational;

/// Largest scaled magnitude accepted for one transform or one project weight.
const ENTRY_LIMIT: i128 = 1 << 100;
/// Largest accepted bound on any scaled total.
const TOTAL_LIMIT: i128 = 1 << 120;

pub(crate) struct Group {
    pub ballot: ProjectSet,
    pub count: u64,
    /// Non-zero transforms of the ballot's subsets up to the bound.
    pub entries: Vec<(ProjectSet, i128)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Scaled {
    Sum(i128),
    Min(i128),
    Product { zeros: u64, product: BigInt },
}

impl Ord for Scaled {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Scaled::Sum(a), Scaled::Sum(b)) | (Scaled::Min(a), Scaled::Min(b)) => a.cmp(b),
            (
                Scaled::Product { zeros: za, product: pa },
                Scaled::Product { zeros: zb, product: pb },
            ) => zb.cmp(za).then_with(|| pa.cmp(pb)),
            _ => panic!("scores of different aggregators compared"),
        }
    }
}

impl PartialOrd for Scaled {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone)]
pub(crate) struct State {
    pub included: ProjectSet,
    pub banned: ProjectSet,
    pub remaining: u64,
    /// Scaled satisfaction of each group.
    pub sats: Vec<i128>,
}

pub(crate) struct Context {
    pub alpha: Aggregator,
    pub n: usize,
    pub costs: Vec<u64>,
    pub approvals: Vec<usize>,
    pub budget: u64,
    pub voters: u64,
    pub limit: usize,
    pub order: Vec<usize>,
    pub groups: Vec<Group>,
    pub groups_of: Vec<Vec<usize>>,
    pub denom: BigInt,
    /// Per-project bound on its total contribution, with interaction terms
    /// split evenly among their members.
    pub weight: Vec<i128>,
    /// Same, with each interaction term charged in full to every member.
    pub weight_full: Vec<i128>,
    pub by_density: Vec<usize>,
    pub by_density_full: Vec<usize>,
}

fn to_i128(value: &BigInt) -> Result<i128, SolveError> {
    value
        .to_i128()
        .filter(|v| v.abs() <= ENTRY_LIMIT)
        .ok_or(SolveError::Overflow)
}

fn density_order(weights: &[i128], costs: &[u64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..weights.len()).collect();
    // w_a / c_a > w_b / c_b  <=>  w_a * c_b > w_b * c_a
    order.sort_by(|&a, &b| {
        let lhs = BigInt::from(weights[a]) * BigInt::from(costs[b]);
        let rhs = BigInt::from(weights[b]) * BigInt::from(costs[a]);
        rhs.cmp(&lhs).then(a.cmp(&b))
    });
    order
}

impl Context {
    pub fn new(
        model: &SynergyModel,
        scenario: &BudgetingScenario,
        alpha: Aggregator,
    ) -> Result<Self, SolveError> {
        model.check_bound_to(scenario)?;
        let n = scenario.num_projects();
        let limit = model.additivity().limit();

        let mut index: HashMap<ProjectSet, usize> = HashMap::new();
        let mut raw_groups: Vec<(ProjectSet, u64)> = Vec::new();
        for b in scenario.ballots() {
            let slot = *index.entry(b.approvals).or_insert_with(|| {
                raw_groups.push((b.approvals, 0));
                raw_groups.len() - 1
            });
            raw_groups[slot].1 += 1;
        }

        let mut transforms: Vec<Vec<(ProjectSet, Rational)>> = Vec::with_capacity(raw_groups.len());
        let mut denom = BigInt::one();
        for (ballot, _) in &raw_groups {
            let mut list = Vec::new();
            for c in ballot.subsets_up_to(limit) {
                let m = model.transform_of(&c);
                if !m.is_zero() {
                    denom = denom.lcm(m.denom());
                    list.push((c, m));
                }
            }
            transforms.push(list);
        }

        let mut groups = Vec::with_capacity(raw_groups.len());
        let mut groups_of = vec![Vec::new(); n];
        let mut total: i128 = 0;
        for (g, ((ballot, count), list)) in raw_groups.into_iter().zip(transforms).enumerate() {
            let mut entries = Vec::with_capacity(list.len());
            let mut magnitude: i128 = 0;
            for (c, m) in list {
                let scaled = to_i128(&(m * Rational::from_integer(denom.clone())).to_integer())?;
                magnitude = magnitude.checked_add(scaled.abs()).ok_or(SolveError::Overflow)?;
                entries.push((c, scaled));
            }
            total = magnitude
                .checked_mul(count as i128)
                .and_then(|m| total.checked_add(m))
                .filter(|t| *t <= TOTAL_LIMIT)
                .ok_or(SolveError::Overflow)?;
            for a in ballot.iter() {
                groups_of[a].push(g);
            }
            groups.push(Group { ballot, count, entries });
        }

        let mut weight = vec![0i128; n];
        let mut weight_full = vec![0i128; n];
        for group in &groups {
            let count = group.count as i128;
            for a in group.ballot.iter() {
                let mut share = 0i128;
                let mut full = 0i128;
                for (c, m) in &group.entries {
                    if !c.contains(a) {
                        continue;
                    }
                    if c.len() == 1 {
                        share += m;
                        full += m;
                    } else if *m > 0 {
                        share += m.div_ceil(&(c.len() as i128));
                        full += m;
                    }
                }
                weight[a] += share * count;
                weight_full[a] += full * count;
            }
        }
        if weight_full.iter().try_fold(0i128, |acc, w| acc.checked_add(*w)).is_none_or(|t| t > TOTAL_LIMIT) {
            return Err(SolveError::Overflow);
        }

        let costs: Vec<u64> = (0..n).map(|a| scenario.cost(a)).collect();
        Ok(Context {
            alpha,
            n,
            approvals: (0..n).map(|a| scenario.approval_count(a)).collect(),
            budget: scenario.budget(),
            voters: scenario.num_voters() as u64,
            limit,
            order: scenario.approval_order(),
            groups,
            groups_of,
            denom,
            by_density: density_order(&weight, &costs),
            by_density_full: density_order(&weight_full, &costs),
            weight,
            weight_full,
            costs,
        })
    }

    pub fn root(&self) -> State {
        State {
            included: ProjectSet::EMPTY,
            banned: ProjectSet::EMPTY,
            remaining: self.budget,
            sats: vec![0; self.groups.len()],
        }
    }

    pub fn include(&self, st: &mut State, a: usize) {
        debug_assert!(self.costs[a] <= st.remaining && !st.included.contains(a));
        st.included.insert(a);
        st.remaining -= self.costs[a];
        for &g in &self.groups_of[a] {
            let delta: i128 = self.groups[g]
                .entries
                .iter()
                .filter(|(c, _)| c.contains(a) && c.is_subset(&st.included))
                .map(|(_, m)| *m)
                .sum();
            st.sats[g] += delta;
        }
    }

    /// State reached by deciding `included` in and `banned` out.
    pub fn state_of(&self, included: &ProjectSet, banned: &ProjectSet) -> State {
        let mut st = self.root();
        for a in included.iter() {
            self.include(&mut st, a);
        }
        st.banned = *banned;
        st
    }

    pub fn is_undecided(&self, st: &State, a: usize) -> bool {
        !st.included.contains(a) && !st.banned.contains(a)
    }

    pub fn is_exhaustive(&self, st: &State) -> bool {
        (0..self.n).all(|a| st.included.contains(a) || self.costs[a] > st.remaining)
    }

    pub fn score(&self, sats: &[i128]) -> Scaled {
        match self.alpha {
            Aggregator::Sum => Scaled::Sum(
                self.groups
                    .iter()
                    .zip(sats)
                    .map(|(g, s)| s * g.count as i128)
                    .sum(),
            ),
            Aggregator::Min => Scaled::Min(sats.iter().copied().min().unwrap_or(0)),
            Aggregator::Product => {
                let mut zeros = 0;
                let mut product = BigInt::one();
                for (g, &s) in self.groups.iter().zip(sats) {
                    if s > 0 {
                        product *= Pow::pow(BigInt::from(s), g.count);
                    } else {
                        zeros += g.count;
                    }
                }
                Scaled::Product { zeros, product }
            }
        }
    }

    pub fn to_score(&self, scaled: &Scaled) -> Score {
        let over = |numer: BigInt, denom: BigInt| Rational::new(numer, denom);
        match scaled {
            Scaled::Sum(t) => Score::Sum(over(BigInt::from(*t), self.denom.clone())),
            Scaled::Min(t) => Score::Min(over(BigInt::from(*t), self.denom.clone())),
            Scaled::Product { zeros, product } => Score::Product {
                zeros: *zeros as usize,
                positive: over(product.clone(), Pow::pow(self.denom.clone(), self.voters - zeros)),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational;
    use crate::scenario::tests::example_one;
    use crate::synergy::Additivity;

    #[test]
    fn merges_identical_ballots() {
        let s = example_one();
        let m = SynergyModel::build(&s, Additivity::Bounded(2)).unwrap();
        let ctx = Context::new(&m, &s, Aggregator::Sum).unwrap();
        assert_eq!(ctx.groups.len(), 4);
        assert_eq!(ctx.denom, BigInt::from(16));

        let raw = crate::scenario::RawScenario::from_parts(
            3,
            [("a", 1), ("b", 2)],
            [("1", vec!["a", "b"]), ("2", vec!["a", "b"]), ("3", vec!["a"])],
        );
        let (s, _) = crate::scenario::validate(raw, crate::scenario::ValidationPolicy::Strict).unwrap();
        let m = SynergyModel::build(&s, Additivity::Bounded(2)).unwrap();
        let ctx = Context::new(&m, &s, Aggregator::Sum).unwrap();
        assert_eq!(ctx.groups.iter().map(|g| g.count).collect::<Vec<_>>(), [2, 1]);
    }

    #[test]
    fn incremental_satisfactions_match_direct_evaluation() {
        let s = example_one();
        let m = SynergyModel::build(&s, Additivity::Bounded(2)).unwrap();
        let ctx = Context::new(&m, &s, Aggregator::Sum).unwrap();
        let mut st = ctx.root();
        for a in [3, 0, 2, 1] {
            ctx.include(&mut st, a);
        }
        let total = ctx.to_score(&ctx.score(&st.sats));
        assert_eq!(total, Score::Sum(rational(419, 16)));
    }
}
