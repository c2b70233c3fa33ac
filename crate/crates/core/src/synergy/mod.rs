//! Interaction detection from ballot co-occurrence.
//!
//! For a subset `S` of at least two projects the synergy term compares how often
//! `S` is approved as a whole with how often it would be if its members were
//! approved independently:
//!
//! ```text
//! raw(S) = (r(S) - Π_{a∈S} r({a})) · cost(S)
//! m(S)   = max(raw(S), max_{a∈S} -Σ_{C⊊S, a∈C} m(C))
//! ```
//!
//! with `m(∅) = 0` and `m({a}) = cost(a)`. The utility of a set is the sum of
//! the transforms of its subsets. Under a `k` additivity bound transforms of
//! subsets larger than `k` are zero.

mod mobius;
mod report;

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::RwLock;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::scenario::{BudgetingScenario, ScenarioError};
use crate::set::ProjectSet;
use crate::Rational;

pub use mobius::{mobius_from_utility_table, utility_from_mobius, SetFunction, SetFunctionError};
pub use report::{
    interaction_report, Classification, InteractionRecord, INTERACTION_CSV_HEADER,
};

/// Largest scenario for which an unbounded model may be built.
pub const UNBOUNDED_MAX_PROJECTS: usize = 20;

/// Ballot-contained subsets up to this size are materialized when the model is built.
pub const EAGER_SIZE_CAP: usize = 6;

/// Interaction order: transforms of subsets larger than the bound vanish.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Additivity {
    Bounded(usize),
    Unbounded,
}

impl Additivity {
    /// Largest subset size with a possibly non-zero transform.
    pub fn limit(self) -> usize {
        match self {
            Additivity::Bounded(k) => k,
            Additivity::Unbounded => usize::MAX,
        }
    }

    /// Whether u_M is guaranteed super-set monotone on sets of this size.
    pub fn covers(self, size: usize) -> bool {
        size <= self.limit()
    }
}

impl Default for Additivity {
    fn default() -> Self {
        Additivity::Bounded(2)
    }
}

impl FromStr for Additivity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("unbounded") {
            return Ok(Additivity::Unbounded);
        }
        match s.parse::<usize>() {
            Ok(k) if k >= 1 => Ok(Additivity::Bounded(k)),
            _ => Err(format!("k must be a positive integer or `unbounded`, got `{s}`")),
        }
    }
}

impl fmt::Display for Additivity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Additivity::Bounded(k) => write!(f, "{k}"),
            Additivity::Unbounded => f.write_str("unbounded"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("model was built for a different scenario")]
    ScenarioMismatch,
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error("unbounded additivity needs at most {UNBOUNDED_MAX_PROJECTS} projects, scenario has {0}; use a k bound")]
    TooManyProjects(usize),
    #[error("additivity bound must be at least 1")]
    ZeroBound,
}

/// Share of ballots containing a set: `approvals / voters`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rate {
    pub approvals: usize,
    pub voters: usize,
}

impl Rate {
    pub fn value(&self) -> Rational {
        Rational::new(BigInt::from(self.approvals), BigInt::from(self.voters))
    }
}

/// Rate of ballots containing every project of `ids` (1 for the empty set).
pub fn appearance_rate<S: AsRef<str>>(
    scenario: &BudgetingScenario,
    ids: &[S],
) -> Result<Rate, ScenarioError> {
    let set = scenario.set_of(ids)?;
    Ok(Rate {
        approvals: count_containing(scenario.ballots().iter().map(|b| &b.approvals), &set),
        voters: scenario.num_voters(),
    })
}

fn count_containing<'a>(ballots: impl Iterator<Item = &'a ProjectSet>, set: &ProjectSet) -> usize {
    ballots.filter(|b| set.is_subset(b)).count()
}

/// Möbius transforms of one scenario under an additivity bound.
///
/// Transforms of ballot-contained subsets are computed when the model is
/// built; anything else is computed on first lookup and memoized. Lookups are
/// safe from several threads at once.
pub struct SynergyModel {
    additivity: Additivity,
    fingerprint: u64,
    voters: usize,
    budget: u64,
    costs: Vec<u64>,
    ballots: Vec<ProjectSet>,
    approvals: Vec<usize>,
    table: HashMap<ProjectSet, Rational>,
    lazy: RwLock<HashMap<ProjectSet, Rational>>,
}

impl Clone for SynergyModel {
    fn clone(&self) -> Self {
        SynergyModel {
            additivity: self.additivity,
            fingerprint: self.fingerprint,
            voters: self.voters,
            budget: self.budget,
            costs: self.costs.clone(),
            ballots: self.ballots.clone(),
            approvals: self.approvals.clone(),
            table: self.table.clone(),
            lazy: RwLock::new(self.lazy.read().expect("memo lock").clone()),
        }
    }
}

impl fmt::Debug for SynergyModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SynergyModel")
            .field("additivity", &self.additivity)
            .field("projects", &self.costs.len())
            .field("voters", &self.voters)
            .field("materialized", &self.table.len())
            .finish()
    }
}

impl SynergyModel {
    /// Builds the model, materializing singletons and every ballot-contained
    /// subset of size at most `min(k, EAGER_SIZE_CAP)`.
    pub fn build(scenario: &BudgetingScenario, additivity: Additivity) -> Result<Self, ModelError> {
        Self::build_with(scenario, additivity, true)
    }

    /// Builds with only singletons stored; every interaction is computed on
    /// first lookup. Cheaper when few subsets will be queried.
    pub fn lazy(scenario: &BudgetingScenario, additivity: Additivity) -> Result<Self, ModelError> {
        Self::build_with(scenario, additivity, false)
    }

    fn build_with(scenario: &BudgetingScenario, additivity: Additivity, eager: bool) -> Result<Self, ModelError> {
        match additivity {
            Additivity::Bounded(0) => return Err(ModelError::ZeroBound),
            Additivity::Unbounded if scenario.num_projects() > UNBOUNDED_MAX_PROJECTS => {
                return Err(ModelError::TooManyProjects(scenario.num_projects()))
            }
            _ => {}
        }
        let n = scenario.num_projects();
        let costs: Vec<u64> = (0..n).map(|i| scenario.cost(i)).collect();
        let ballots: Vec<ProjectSet> = scenario.ballots().iter().map(|b| b.approvals).collect();
        let mut table = HashMap::new();
        table.insert(ProjectSet::EMPTY, Rational::zero());
        for (i, &c) in costs.iter().enumerate() {
            table.insert(ProjectSet::singleton(i), Rational::from_integer(BigInt::from(c)));
        }
        let mut model = SynergyModel {
            additivity,
            fingerprint: scenario.fingerprint(),
            voters: ballots.len(),
            budget: scenario.budget(),
            approvals: (0..n).map(|i| scenario.approval_count(i)).collect(),
            costs,
            ballots,
            table,
            lazy: RwLock::new(HashMap::new()),
        };

        if !eager {
            return Ok(model);
        }
        let eager = additivity.limit().min(EAGER_SIZE_CAP);
        let mut pending: BTreeSet<(usize, Vec<usize>)> = BTreeSet::new();
        for ballot in &model.ballots {
            for s in ballot.subsets_up_to(eager) {
                if s.len() >= 2 {
                    pending.insert((s.len(), s.to_vec()));
                }
            }
        }
        for (_, members) in pending {
            let s: ProjectSet = members.into_iter().collect();
            model.transform_of(&s);
        }
        let computed = std::mem::take(&mut *model.lazy.write().expect("memo lock"));
        model.table.extend(computed);
        Ok(model)
    }

    pub fn additivity(&self) -> Additivity {
        self.additivity
    }

    pub fn num_projects(&self) -> usize {
        self.costs.len()
    }

    pub fn num_voters(&self) -> usize {
        self.voters
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    pub fn cost(&self, project: usize) -> u64 {
        self.costs[project]
    }

    pub fn ballots(&self) -> &[ProjectSet] {
        &self.ballots
    }

    pub fn set_cost(&self, set: &ProjectSet) -> u64 {
        set.iter().map(|i| self.costs[i]).sum()
    }

    /// Fails unless the model was built from this scenario.
    pub fn check_bound_to(&self, scenario: &BudgetingScenario) -> Result<(), ModelError> {
        if scenario.fingerprint() == self.fingerprint {
            Ok(())
        } else {
            Err(ModelError::ScenarioMismatch)
        }
    }

    /// Subsets whose transforms were computed at build time (∅ and singletons included).
    pub fn materialized(&self) -> impl Iterator<Item = &ProjectSet> {
        self.table.keys()
    }

    pub fn is_materialized(&self, set: &ProjectSet) -> bool {
        self.table.contains_key(set)
    }

    /// Number of ballots containing the set.
    pub fn approvals_of(&self, set: &ProjectSet) -> usize {
        if set.len() == 1 {
            return self.approvals[set.first().expect("non-empty")];
        }
        count_containing(self.ballots.iter(), set)
    }

    pub fn rate(&self, set: &ProjectSet) -> Rate {
        Rate {
            approvals: self.approvals_of(set),
            voters: self.voters,
        }
    }

    /// Rate the set would have if its members were approved independently.
    pub fn expected_rate(&self, set: &ProjectSet) -> Rational {
        let v = BigInt::from(self.voters);
        let mut numer = BigInt::one();
        let mut denom = BigInt::one();
        for a in set.iter() {
            numer *= BigInt::from(self.approvals[a]);
            denom *= &v;
        }
        Rational::new(numer, denom)
    }

    /// `(r(S) - Π r({a})) · cost(S)`, before the monotonicity floor.
    pub fn raw_term(&self, set: &ProjectSet) -> Rational {
        let cost = Rational::from_integer(BigInt::from(self.set_cost(set)));
        (self.rate(set).value() - self.expected_rate(set)) * cost
    }

    /// Transform of a set of project indices, memoized.
    pub fn transform_of(&self, set: &ProjectSet) -> Rational {
        if let Some(v) = self.table.get(set) {
            return v.clone();
        }
        let size = set.len();
        if size <= 1 {
            // ∅ and singletons are always in the table; reaching here means an
            // index past the scenario's projects
            panic!("project index out of range in {set:?}");
        }
        if size > self.additivity.limit() {
            return Rational::zero();
        }
        if let Some(v) = self.lazy.read().expect("memo lock").get(set) {
            return v.clone();
        }
        let value = self.compute(set);
        self.lazy
            .write()
            .expect("memo lock")
            .entry(*set)
            .or_insert(value)
            .clone()
    }

    fn compute(&self, set: &ProjectSet) -> Rational {
        let members = set.to_vec();
        let mut per_member = vec![Rational::zero(); members.len()];
        let inner = (set.len() - 1).min(self.additivity.limit());
        for sub in set.subsets_up_to(inner) {
            let m = self.transform_of(&sub);
            if m.is_zero() {
                continue;
            }
            for (slot, a) in members.iter().enumerate() {
                if sub.contains(*a) {
                    per_member[slot] += &m;
                }
            }
        }
        let floor = per_member
            .into_iter()
            .map(|s| -s)
            .max()
            .expect("at least two members");
        self.raw_term(set).max(floor)
    }

    /// u_M of a set of project indices: the sum of transforms of its subsets.
    pub fn utility_of(&self, set: &ProjectSet) -> Rational {
        set.subsets_up_to(self.additivity.limit())
            .iter()
            .map(|s| self.transform_of(s))
            .sum()
    }

    /// Transform of the named projects, after checking the scenario binding.
    pub fn transform(&self, scenario: &BudgetingScenario, set: &ProjectSet) -> Result<Rational, ModelError> {
        self.check_bound_to(scenario)?;
        Ok(self.transform_of(set))
    }

    /// u_M of a set, after checking the scenario binding.
    pub fn utility(&self, scenario: &BudgetingScenario, set: &ProjectSet) -> Result<Rational, ModelError> {
        self.check_bound_to(scenario)?;
        Ok(self.utility_of(set))
    }

    /// Copy of the model with one stored transform replaced.
    ///
    /// Exists for negative controls of the axiom checkers: the result is no
    /// longer a faithful u_M.
    pub fn with_transform_override(&self, set: ProjectSet, value: Rational) -> SynergyModel {
        let mut corrupted = self.clone();
        corrupted.table.insert(set, value);
        corrupted
    }
}

/// Transform `m(S)` of the projects named in `ids`.
pub fn mobius_transform<S: AsRef<str>>(
    model: &SynergyModel,
    scenario: &BudgetingScenario,
    ids: &[S],
) -> Result<Rational, ModelError> {
    let set = scenario.set_of(ids)?;
    model.transform(scenario, &set)
}

/// Utility `u_M(S)` of the projects named in `ids`.
pub fn utility_um<S: AsRef<str>>(
    model: &SynergyModel,
    scenario: &BudgetingScenario,
    ids: &[S],
) -> Result<Rational, ModelError> {
    let set = scenario.set_of(ids)?;
    model.utility(scenario, &set)
}

/// Builds a model; see [`SynergyModel::build`].
pub fn build_model(scenario: &BudgetingScenario, additivity: Additivity) -> Result<SynergyModel, ModelError> {
    SynergyModel::build(scenario, additivity)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational;
    use crate::scenario::tests::example_one;
    use crate::scenario::{validate, RawScenario, ValidationPolicy};

    fn k2() -> (BudgetingScenario, SynergyModel) {
        let s = example_one();
        let m = SynergyModel::build(&s, Additivity::Bounded(2)).unwrap();
        (s, m)
    }

    #[test]
    fn rates_of_example_one() {
        let s = example_one();
        assert_eq!(appearance_rate(&s, &["A", "B"]).unwrap().value(), rational(3, 4));
        assert_eq!(appearance_rate(&s, &["C", "D"]).unwrap().value(), rational(0, 1));
        assert_eq!(appearance_rate::<&str>(&s, &[]).unwrap().value(), rational(1, 1));
    }

    #[test]
    fn transforms_of_example_one() {
        let (s, m) = k2();
        assert_eq!(mobius_transform(&m, &s, &["A", "B"]).unwrap(), rational(15, 16));
        assert_eq!(mobius_transform(&m, &s, &["C", "D"]).unwrap(), rational(-1, 1));
        assert_eq!(mobius_transform(&m, &s, &["A", "D"]).unwrap(), rational(3, 8));
        assert_eq!(mobius_transform(&m, &s, &["B", "D"]).unwrap(), rational(1, 2));
        assert_eq!(mobius_transform(&m, &s, &["A", "B", "D"]).unwrap(), rational(0, 1));
        assert_eq!(m.raw_term(&s.set_of(&["C", "D"]).unwrap()), rational(-1, 1));
    }

    #[test]
    fn utilities_of_example_one() {
        let (s, m) = k2();
        assert_eq!(utility_um(&m, &s, &["A", "B"]).unwrap(), rational(95, 16));
        assert_eq!(utility_um(&m, &s, &["C", "D"]).unwrap(), rational(3, 1));
        assert_eq!(utility_um(&m, &s, &["C"]).unwrap(), rational(3, 1));
        assert_eq!(utility_um(&m, &s, &["A", "B", "D"]).unwrap(), rational(125, 16));
    }

    #[test]
    fn k1_collapses_to_cost() {
        let s = example_one();
        let m = SynergyModel::build(&s, Additivity::Bounded(1)).unwrap();
        for set in s.all_projects().subsets_up_to(5) {
            assert_eq!(m.utility_of(&set), Rational::from_integer(s.set_cost(&set).into()));
        }
        assert_eq!(m.materialized().count(), 6);
    }

    #[test]
    fn eager_table_holds_ballot_pairs_only() {
        let (s, m) = k2();
        let pairs: BTreeSet<Vec<String>> = m
            .materialized()
            .filter(|p| p.len() == 2)
            .map(|p| s.ids_of(p))
            .collect();
        let expected: BTreeSet<Vec<String>> = [
            "AB", "AD", "BD", "AE", "BE", "DE", "AC", "BC", "CE",
        ]
        .iter()
        .map(|p| p.chars().map(|c| c.to_string()).collect())
        .collect();
        assert_eq!(pairs, expected);
        let cd = s.set_of(&["C", "D"]).unwrap();
        assert!(!m.is_materialized(&cd));
        assert_eq!(m.transform_of(&cd), rational(-1, 1));
        assert_eq!(m.transform_of(&s.set_of(&["A", "B", "C"]).unwrap()), rational(0, 1));
    }

    #[test]
    fn single_project_model() {
        let raw = RawScenario::from_parts(3, [("a", 2)], [("v", vec!["a"])]);
        let (s, _) = validate(raw, ValidationPolicy::Strict).unwrap();
        let m = SynergyModel::build(&s, Additivity::Unbounded).unwrap();
        assert_eq!(m.materialized().count(), 2);
        assert_eq!(m.transform_of(&ProjectSet::singleton(0)), rational(2, 1));
    }

    #[test]
    fn mismatched_scenario_is_rejected() {
        let (_, m) = k2();
        let raw = RawScenario::from_parts(3, [("a", 2)], [("v", vec!["a"])]);
        let (other, _) = validate(raw, ValidationPolicy::Strict).unwrap();
        assert_eq!(
            m.utility(&other, &ProjectSet::singleton(0)),
            Err(ModelError::ScenarioMismatch)
        );
    }

    #[test]
    fn unbounded_refuses_large_scenarios() {
        let projects: Vec<(String, u64)> = (0..21).map(|i| (format!("p{i:02}"), 1)).collect();
        let raw = RawScenario::from_parts(
            30,
            projects,
            [("v".to_string(), vec!["p00".to_string()])],
        );
        let (s, _) = validate(raw, ValidationPolicy::Strict).unwrap();
        assert_eq!(
            SynergyModel::build(&s, Additivity::Unbounded).unwrap_err(),
            ModelError::TooManyProjects(21)
        );
        assert!(SynergyModel::build(&s, Additivity::Bounded(3)).is_ok());
    }

    #[test]
    fn concurrent_lazy_lookups_agree() {
        let (s, m) = k2();
        let cd = s.set_of(&["C", "D"]).unwrap();
        let values: Vec<Rational> = std::thread::scope(|scope| {
            let handles: Vec<_> = (0..8).map(|_| scope.spawn(|| m.transform_of(&cd))).collect();
            handles.into_iter().map(|h| h.join().unwrap()).collect()
        });
        assert!(values.iter().all(|v| *v == rational(-1, 1)));
    }

    #[test]
    fn additivity_parsing() {
        assert_eq!("unbounded".parse::<Additivity>(), Ok(Additivity::Unbounded));
        assert_eq!("3".parse::<Additivity>(), Ok(Additivity::Bounded(3)));
        assert!("0".parse::<Additivity>().is_err());
    }
}
