//! Budgeting scenarios: projects with integer costs, approval ballots and a
//! budget limit.
//!
//! A [`RawScenario`] is what the Pabulib reader produces. It still carries the
//! ballots in their listed order, possibly with duplicates and possibly over
//! budget. [`validate`] turns it into a [`BudgetingScenario`], the only form the
//! rest of the crate accepts.

mod pabulib;
mod stats;
mod validate;

use std::collections::{BTreeMap, HashMap};
use std::hash::{Hash, Hasher};

use thiserror::Error;

use crate::set::{ProjectSet, MAX_PROJECTS};

pub use pabulib::{parse_pabulib, serialize_pabulib, ParseError, ParseErrorKind};
pub use stats::{budget_utilization, cost_decile_vector, BudgetUtilization};
pub use validate::{validate, ValidationError, ValidationPolicy, ValidationReport};

/// Errors raised when addressing projects or voters by id.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScenarioError {
    #[error("unknown project id `{0}`")]
    UnknownProject(String),
    #[error("unknown voter `{0}`")]
    UnknownVoter(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Project {
    pub id: String,
    pub label: String,
    pub cost: u64,
    /// Columns of the PROJECTS section other than `project_id`, `cost` and `name`.
    pub extra: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ballot {
    pub voter_id: String,
    pub approvals: ProjectSet,
    /// Columns of the VOTES section other than `voter_id` and `vote`.
    pub extra: BTreeMap<String, String>,
}

/// Project as read from a file, before validation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawProject {
    pub id: String,
    pub label: String,
    pub cost: u64,
    pub extra: BTreeMap<String, String>,
    pub line: usize,
}

/// Ballot as read from a file: approvals in listed order, duplicates kept.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawBallot {
    pub voter_id: String,
    pub approvals: Vec<String>,
    pub extra: BTreeMap<String, String>,
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RawScenario {
    pub budget: u64,
    /// META entries other than `budget`, verbatim.
    pub meta: BTreeMap<String, String>,
    pub projects: Vec<RawProject>,
    pub ballots: Vec<RawBallot>,
}

impl RawScenario {
    /// Convenience constructor for programmatic scenarios (tests, fixtures, generators).
    pub fn from_parts<P, B, S>(budget: u64, projects: P, ballots: B) -> Self
    where
        P: IntoIterator<Item = (S, u64)>,
        B: IntoIterator<Item = (S, Vec<S>)>,
        S: Into<String>,
    {
        RawScenario {
            budget,
            meta: BTreeMap::new(),
            projects: projects
                .into_iter()
                .map(|(id, cost)| RawProject {
                    id: id.into(),
                    label: String::new(),
                    cost,
                    extra: BTreeMap::new(),
                    line: 0,
                })
                .collect(),
            ballots: ballots
                .into_iter()
                .map(|(voter, approvals)| RawBallot {
                    voter_id: voter.into(),
                    approvals: approvals.into_iter().map(Into::into).collect(),
                    extra: BTreeMap::new(),
                    line: 0,
                })
                .collect(),
        }
    }
}

/// A validated scenario. Immutable once built.
///
/// Projects are stored sorted by id; a project's index in this order is the
/// index used by every [`ProjectSet`].
#[derive(Debug, Clone)]
pub struct BudgetingScenario {
    projects: Vec<Project>,
    ballots: Vec<Ballot>,
    budget: u64,
    meta: BTreeMap<String, String>,
    by_id: HashMap<String, usize>,
    approvals: Vec<usize>,
    fingerprint: u64,
}

impl PartialEq for BudgetingScenario {
    fn eq(&self, other: &Self) -> bool {
        self.projects == other.projects
            && self.ballots == other.ballots
            && self.budget == other.budget
            && self.meta == other.meta
    }
}

impl Eq for BudgetingScenario {}

impl BudgetingScenario {
    /// Assembles a scenario from already-checked parts; `projects` must be id-sorted.
    pub(crate) fn assemble(
        projects: Vec<Project>,
        ballots: Vec<Ballot>,
        budget: u64,
        meta: BTreeMap<String, String>,
    ) -> Self {
        debug_assert!(projects.windows(2).all(|w| w[0].id < w[1].id));
        debug_assert!(projects.len() <= MAX_PROJECTS);
        let by_id = projects
            .iter()
            .enumerate()
            .map(|(i, p)| (p.id.clone(), i))
            .collect();
        let mut approvals = vec![0; projects.len()];
        for b in &ballots {
            for a in b.approvals.iter() {
                approvals[a] += 1;
            }
        }
        let mut hasher = std::collections::hash_map::DefaultHasher::new();
        budget.hash(&mut hasher);
        for p in &projects {
            p.id.hash(&mut hasher);
            p.cost.hash(&mut hasher);
        }
        for b in &ballots {
            b.approvals.hash(&mut hasher);
        }
        BudgetingScenario {
            projects,
            ballots,
            budget,
            meta,
            by_id,
            approvals,
            fingerprint: hasher.finish(),
        }
    }

    pub fn projects(&self) -> &[Project] {
        &self.projects
    }

    pub fn ballots(&self) -> &[Ballot] {
        &self.ballots
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    pub fn meta(&self) -> &BTreeMap<String, String> {
        &self.meta
    }

    pub fn num_projects(&self) -> usize {
        self.projects.len()
    }

    pub fn num_voters(&self) -> usize {
        self.ballots.len()
    }

    /// Hash of budget, costs and ballots; binds synergy models to their scenario.
    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    pub fn cost(&self, project: usize) -> u64 {
        self.projects[project].cost
    }

    /// Number of ballots approving the project.
    pub fn approval_count(&self, project: usize) -> usize {
        self.approvals[project]
    }

    pub fn index_of(&self, id: &str) -> Result<usize, ScenarioError> {
        self.by_id
            .get(id)
            .copied()
            .ok_or_else(|| ScenarioError::UnknownProject(id.to_string()))
    }

    pub fn voter_index(&self, voter_id: &str) -> Result<usize, ScenarioError> {
        self.ballots
            .iter()
            .position(|b| b.voter_id == voter_id)
            .ok_or_else(|| ScenarioError::UnknownVoter(voter_id.to_string()))
    }

    /// Resolves a list of project ids into a set.
    pub fn set_of<S: AsRef<str>>(&self, ids: &[S]) -> Result<ProjectSet, ScenarioError> {
        ids.iter().map(|id| self.index_of(id.as_ref())).collect()
    }

    /// Sorted member ids of a set.
    pub fn ids_of(&self, set: &ProjectSet) -> Vec<String> {
        set.iter().map(|i| self.projects[i].id.clone()).collect()
    }

    pub fn all_projects(&self) -> ProjectSet {
        ProjectSet::full(self.projects.len())
    }

    /// Total cost of a set of project indices.
    pub fn set_cost(&self, set: &ProjectSet) -> u64 {
        set.iter().map(|i| self.projects[i].cost).sum()
    }

    /// Project indices sorted by decreasing approval count, ties by id.
    pub fn approval_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.projects.len()).collect();
        order.sort_by(|&a, &b| self.approvals[b].cmp(&self.approvals[a]).then(a.cmp(&b)));
        order
    }

    /// Voters approving a project.
    pub fn approvers(&self, project: usize) -> impl Iterator<Item = usize> + '_ {
        self.ballots
            .iter()
            .enumerate()
            .filter(move |(_, b)| b.approvals.contains(project))
            .map(|(i, _)| i)
    }

    /// Converts back to the raw form (approvals listed in id order).
    pub fn to_raw(&self) -> RawScenario {
        RawScenario {
            budget: self.budget,
            meta: self.meta.clone(),
            projects: self
                .projects
                .iter()
                .map(|p| RawProject {
                    id: p.id.clone(),
                    label: p.label.clone(),
                    cost: p.cost,
                    extra: p.extra.clone(),
                    line: 0,
                })
                .collect(),
            ballots: self
                .ballots
                .iter()
                .map(|b| RawBallot {
                    voter_id: b.voter_id.clone(),
                    approvals: self.ids_of(&b.approvals),
                    extra: b.extra.clone(),
                    line: 0,
                })
                .collect(),
        }
    }
}

/// Total cost of the projects named in `ids`; the empty set costs 0.
pub fn subset_cost<S: AsRef<str>>(
    scenario: &BudgetingScenario,
    ids: &[S],
) -> Result<u64, ScenarioError> {
    Ok(scenario.set_cost(&scenario.set_of(ids)?))
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    /// Five projects A..E with costs (2,3,3,1,1), budget 9, four ballots.
    pub fn example_one() -> BudgetingScenario {
        let raw = RawScenario::from_parts(
            9,
            [("A", 2), ("B", 3), ("C", 3), ("D", 1), ("E", 1)],
            [
                ("1", vec!["A", "B", "D", "E"]),
                ("2", vec!["A", "B", "C"]),
                ("3", vec!["C", "E"]),
                ("4", vec!["A", "B", "D"]),
            ],
        );
        validate(raw, ValidationPolicy::Strict).unwrap().0
    }

    #[test]
    fn subset_cost_examples() {
        let s = example_one();
        assert_eq!(subset_cost(&s, &["A", "B"]).unwrap(), 5);
        assert_eq!(subset_cost::<&str>(&s, &[]).unwrap(), 0);
        assert_eq!(subset_cost(&s, &["A", "B", "C", "D", "E"]).unwrap(), 10);
        assert_eq!(
            subset_cost(&s, &["Z"]),
            Err(ScenarioError::UnknownProject("Z".into()))
        );
    }

    #[test]
    fn approval_order_breaks_ties_by_id() {
        let s = example_one();
        let ids: Vec<_> = s
            .approval_order()
            .into_iter()
            .map(|i| s.projects()[i].id.clone())
            .collect();
        assert_eq!(ids, ["A", "B", "C", "D", "E"]);
    }
}
