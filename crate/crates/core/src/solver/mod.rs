//! Winner determination: satisfactions, aggregate scores, greedy heuristics,
//! upper bounds, branch and bound and a brute-force oracle.

mod bounds;
mod brute;
mod compare;
mod context;
mod heuristics;
mod search;

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::exact::to_f64;
use crate::scenario::{BudgetingScenario, ScenarioError};
use crate::set::ProjectSet;
use crate::synergy::{Additivity, ModelError, SynergyModel};
use crate::Rational;

pub use bounds::{per_project_utility_cap, upper_bound_min_prod, upper_bound_sum, SearchNode};
pub use brute::{brute_force, brute_force_with, BRUTE_FORCE_MAX_PROJECTS};
pub use compare::{compare_with_linear, ComparisonRow, LinearComparison};
pub use heuristics::{exhaustive_fill, greedy_by_approvals, greedy_min_prod};
pub use search::{branch_and_bound, branch_and_bound_with};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Aggregator {
    Sum,
    Min,
    #[serde(rename = "prod")]
    Product,
}

impl Aggregator {
    pub const ALL: [Aggregator; 3] = [Aggregator::Sum, Aggregator::Min, Aggregator::Product];
}

impl FromStr for Aggregator {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "sum" => Ok(Aggregator::Sum),
            "min" => Ok(Aggregator::Min),
            "prod" | "product" => Ok(Aggregator::Product),
            other => Err(format!("unknown aggregator `{other}` (sum|min|prod)")),
        }
    }
}

impl fmt::Display for Aggregator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Aggregator::Sum => "sum",
            Aggregator::Min => "min",
            Aggregator::Product => "prod",
        })
    }
}

/// Aggregate value of a bundle.
///
/// Scores of different aggregators are not meant to be compared; `Ord` puts
/// them in variant order so that sorting never panics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Score {
    Sum(Rational),
    Min(Rational),
    /// Voters with non-positive satisfaction, and the product of the others.
    Product { zeros: usize, positive: Rational },
}

impl Score {
    fn rank(&self) -> u8 {
        match self {
            Score::Sum(_) => 0,
            Score::Min(_) => 1,
            Score::Product { .. } => 2,
        }
    }

    pub fn aggregator(&self) -> Aggregator {
        match self {
            Score::Sum(_) => Aggregator::Sum,
            Score::Min(_) => Aggregator::Min,
            Score::Product { .. } => Aggregator::Product,
        }
    }

    /// The rational part: the value for Sum/Min, the positive product otherwise.
    pub fn value(&self) -> &Rational {
        match self {
            Score::Sum(v) | Score::Min(v) => v,
            Score::Product { positive, .. } => positive,
        }
    }

    pub fn zeros(&self) -> usize {
        match self {
            Score::Product { zeros, .. } => *zeros,
            _ => 0,
        }
    }

    pub fn decimal(&self) -> f64 {
        to_f64(self.value())
    }
}

impl Ord for Score {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Score::Sum(a), Score::Sum(b)) | (Score::Min(a), Score::Min(b)) => a.cmp(b),
            (
                Score::Product { zeros: za, positive: pa },
                Score::Product { zeros: zb, positive: pb },
            ) => zb.cmp(za).then_with(|| pa.cmp(pb)),
            _ => self.rank().cmp(&other.rank()),
        }
    }
}

impl PartialOrd for Score {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Score {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Score::Sum(v) | Score::Min(v) => write!(f, "{v}"),
            Score::Product { zeros, positive } => write!(f, "({zeros}, {positive})"),
        }
    }
}

impl Serialize for Score {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(None)?;
        if let Score::Product { zeros, .. } = self {
            map.serialize_entry("zeros", zeros)?;
        }
        map.serialize_entry("exact", &self.value().to_string())?;
        map.serialize_entry("decimal", &self.decimal())?;
        map.end()
    }
}

/// A feasible set of funded projects.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Bundle {
    pub members: ProjectSet,
    pub cost: u64,
}

impl Bundle {
    pub fn new(scenario: &BudgetingScenario, members: ProjectSet) -> Self {
        Bundle {
            cost: scenario.set_cost(&members),
            members,
        }
    }

    pub fn empty() -> Self {
        Bundle {
            members: ProjectSet::EMPTY,
            cost: 0,
        }
    }

    pub fn from_ids<S: AsRef<str>>(scenario: &BudgetingScenario, ids: &[S]) -> Result<Self, ScenarioError> {
        Ok(Bundle::new(scenario, scenario.set_of(ids)?))
    }

    pub fn ids(&self, scenario: &BudgetingScenario) -> Vec<String> {
        scenario.ids_of(&self.members)
    }

    pub fn contains(&self, project: usize) -> bool {
        self.members.contains(project)
    }

    pub fn is_feasible(&self, scenario: &BudgetingScenario) -> bool {
        self.cost <= scenario.budget()
    }

    /// No unfunded project fits the residual budget.
    pub fn is_exhaustive(&self, scenario: &BudgetingScenario) -> bool {
        let left = scenario.budget().saturating_sub(self.cost);
        (0..scenario.num_projects()).all(|a| self.members.contains(a) || scenario.cost(a) > left)
    }
}

#[derive(Debug, Error)]
pub enum SolveError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error("{n} projects exceed the enumeration cap of {cap}")]
    TooManyProjects { n: usize, cap: usize },
    #[error("scaled utilities overflow 128-bit arithmetic; use a smaller k")]
    Overflow,
    #[error("bundle costs {cost}, above the budget {budget}")]
    Infeasible { cost: u64, budget: u64 },
    #[error("unknown voter index {0}")]
    UnknownVoter(usize),
}

/// Optional caps on a search. Hitting one clears [`SolveReport::optimal`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchLimits {
    pub max_nodes: Option<u64>,
    pub timeout: Option<Duration>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveOptions {
    pub limits: SearchLimits,
    /// Restrict winners to exhaustive bundles. Turning this off is a test
    /// hook that breaks inclusion maximality.
    pub exhaustive: bool,
    /// Record every bound evaluation and incumbent improvement.
    pub trace: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            limits: SearchLimits::default(),
            exhaustive: true,
            trace: false,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub nodes_explored: u64,
    pub nodes_pruned_bound: u64,
    pub nodes_pruned_budget: u64,
    pub bound_evals: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TracedBound {
    pub node: SearchNode,
    pub bound: Score,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SearchTrace {
    pub bounds: Vec<TracedBound>,
    /// Incumbent scores in the order they were adopted.
    pub incumbents: Vec<Score>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub bundle: Bundle,
    pub ids: Vec<String>,
    pub score: Score,
    pub aggregator: Aggregator,
    pub additivity: Additivity,
    pub stats: SearchStats,
    pub wall: Duration,
    pub optimal: bool,
    pub trace: Option<SearchTrace>,
}

pub const SOLVE_CSV_HEADER: [&str; 13] = [
    "instance",
    "aggregator",
    "k",
    "bundle",
    "cost",
    "score",
    "zeros",
    "score_decimal",
    "nodes_explored",
    "nodes_pruned_bound",
    "nodes_pruned_budget",
    "bound_evals",
    "optimal",
];

#[derive(Serialize)]
struct ReportView<'a> {
    bundle: &'a [String],
    cost: u64,
    score: &'a Score,
    aggregator: Aggregator,
    k: String,
    nodes_explored: u64,
    nodes_pruned_bound: u64,
    nodes_pruned_budget: u64,
    bound_evals: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    wall_ms: Option<f64>,
    optimal: bool,
}

impl SolveReport {
    /// JSON object; `wall_ms` only appears when `timing` is set so that
    /// repeated runs produce identical output.
    pub fn to_json(&self, timing: bool) -> serde_json::Value {
        serde_json::to_value(ReportView {
            bundle: &self.ids,
            cost: self.bundle.cost,
            score: &self.score,
            aggregator: self.aggregator,
            k: self.additivity.to_string(),
            nodes_explored: self.stats.nodes_explored,
            nodes_pruned_bound: self.stats.nodes_pruned_bound,
            nodes_pruned_budget: self.stats.nodes_pruned_budget,
            bound_evals: self.stats.bound_evals,
            wall_ms: timing.then(|| self.wall_ms()),
            optimal: self.optimal,
        })
        .expect("report serializes")
    }

    pub fn csv_row(&self, instance: &str) -> [String; 13] {
        [
            instance.to_string(),
            self.aggregator.to_string(),
            self.additivity.to_string(),
            self.ids.join(","),
            self.bundle.cost.to_string(),
            self.score.value().to_string(),
            self.score.zeros().to_string(),
            self.score.decimal().to_string(),
            self.stats.nodes_explored.to_string(),
            self.stats.nodes_pruned_bound.to_string(),
            self.stats.nodes_pruned_budget.to_string(),
            self.stats.bound_evals.to_string(),
            self.optimal.to_string(),
        ]
    }

    pub fn wall_ms(&self) -> f64 {
        self.wall.as_secs_f64() * 1000.0
    }
}

/// u_M of the voter's approved projects that the bundle funds.
pub fn satisfaction(
    model: &SynergyModel,
    scenario: &BudgetingScenario,
    voter: usize,
    bundle: &Bundle,
) -> Result<Rational, SolveError> {
    model.check_bound_to(scenario)?;
    let ballot = scenario
        .ballots()
        .get(voter)
        .ok_or(SolveError::UnknownVoter(voter))?;
    Ok(model.utility_of(&ballot.approvals.intersection(&bundle.members)))
}

pub(crate) fn score_of(alpha: Aggregator, sats: impl IntoIterator<Item = Rational>) -> Score {
    match alpha {
        Aggregator::Sum => Score::Sum(sats.into_iter().sum()),
        Aggregator::Min => Score::Min(
            sats.into_iter()
                .min()
                .unwrap_or_else(Rational::zero),
        ),
        Aggregator::Product => {
            let mut zeros = 0;
            let mut positive = Rational::one();
            for s in sats {
                if s.is_positive() {
                    positive *= s;
                } else {
                    zeros += 1;
                }
            }
            Score::Product { zeros, positive }
        }
    }
}

/// Score of a bundle under an aggregator.
pub fn aggregate(
    model: &SynergyModel,
    scenario: &BudgetingScenario,
    bundle: &Bundle,
    alpha: Aggregator,
) -> Result<Score, SolveError> {
    model.check_bound_to(scenario)?;
    if !bundle.is_feasible(scenario) {
        return Err(SolveError::Infeasible {
            cost: bundle.cost,
            budget: scenario.budget(),
        });
    }
    Ok(score_of(
        alpha,
        scenario
            .ballots()
            .iter()
            .map(|b| model.utility_of(&b.approvals.intersection(&bundle.members))),
    ))
}

/// `true` when `candidate` should replace `best` under the shared tie-break:
/// higher score, then lexicographically smaller member list.
pub(crate) fn beats<S: Ord>(candidate: (&S, &ProjectSet), best: Option<(&S, &ProjectSet)>) -> bool {
    match best {
        None => true,
        Some((score, set)) => match candidate.0.cmp(score) {
            Ordering::Greater => true,
            Ordering::Less => false,
            Ordering::Equal => candidate.1.lex_cmp(set) == Ordering::Less,
        },
    }
}

pub(crate) fn big(n: u64) -> BigInt {
    BigInt::from(n)
}
