use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use super::{Ballot, BudgetingScenario, Project, RawScenario};
use crate::set::{ProjectSet, MAX_PROJECTS};

/// What to do with a ballot whose approvals cost more than the budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ValidationPolicy {
    /// Reject the whole scenario.
    Strict,
    /// Remove the ballot.
    #[default]
    Drop,
    /// Keep the longest prefix of the listed approvals that fits.
    Truncate,
}

impl FromStr for ValidationPolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "strict" => Ok(Self::Strict),
            "drop" => Ok(Self::Drop),
            "truncate" => Ok(Self::Truncate),
            other => Err(format!("unknown policy `{other}` (strict|drop|truncate)")),
        }
    }
}

impl fmt::Display for ValidationPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Strict => "strict",
            Self::Drop => "drop",
            Self::Truncate => "truncate",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValidationError {
    #[error("ballot of `{voter}` costs {cost}, above the budget {budget}")]
    OverBudget { voter: String, cost: u64, budget: u64 },
    #[error("no ballots left after validation")]
    NoBallots,
    #[error("scenario has no projects")]
    NoProjects,
    #[error("budget must be at least 1")]
    ZeroBudget,
    #[error("project `{0}` has zero cost")]
    ZeroCost(String),
    #[error("duplicate project id `{0}`")]
    DuplicateProject(String),
    #[error("duplicate voter id `{0}`")]
    DuplicateVoter(String),
    #[error("ballot of `{voter}` names unknown project `{project}`")]
    UnknownProject { voter: String, project: String },
    #[error("more than {MAX_PROJECTS} projects")]
    TooManyProjects,
}

/// Everything validation changed or noticed.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub policy: Option<ValidationPolicy>,
    /// Voters whose ballot was removed (Drop).
    pub dropped: Vec<String>,
    /// Voters whose ballot was shortened (Truncate).
    pub truncated: Vec<String>,
    /// (voter, project) pairs listed more than once in a ballot.
    pub duplicate_approvals: Vec<(String, String)>,
    /// Projects costing more than the budget; kept but never fundable.
    pub unaffordable_projects: Vec<String>,
}

impl ValidationReport {
    pub fn warning_count(&self) -> usize {
        self.dropped.len() + self.truncated.len() + self.duplicate_approvals.len()
    }
}

/// Checks the knapsack constraint on every ballot and builds the canonical scenario.
pub fn validate(
    raw: RawScenario,
    policy: ValidationPolicy,
) -> Result<(BudgetingScenario, ValidationReport), ValidationError> {
    if raw.budget == 0 {
        return Err(ValidationError::ZeroBudget);
    }
    if raw.projects.is_empty() {
        return Err(ValidationError::NoProjects);
    }
    if raw.projects.len() > MAX_PROJECTS {
        return Err(ValidationError::TooManyProjects);
    }
    let mut report = ValidationReport {
        policy: Some(policy),
        ..Default::default()
    };

    let mut projects: Vec<Project> = Vec::with_capacity(raw.projects.len());
    for p in raw.projects {
        if p.cost == 0 {
            return Err(ValidationError::ZeroCost(p.id));
        }
        projects.push(Project {
            id: p.id,
            label: p.label,
            cost: p.cost,
            extra: p.extra,
        });
    }
    projects.sort_by(|a, b| a.id.cmp(&b.id));
    if let Some(w) = projects.windows(2).find(|w| w[0].id == w[1].id) {
        return Err(ValidationError::DuplicateProject(w[0].id.clone()));
    }
    let index: std::collections::HashMap<&str, usize> = projects
        .iter()
        .enumerate()
        .map(|(i, p)| (p.id.as_str(), i))
        .collect();
    report.unaffordable_projects = projects
        .iter()
        .filter(|p| p.cost > raw.budget)
        .map(|p| p.id.clone())
        .collect();

    let mut voters = HashSet::new();
    let mut ballots = Vec::with_capacity(raw.ballots.len());
    for b in raw.ballots {
        if !voters.insert(b.voter_id.clone()) {
            return Err(ValidationError::DuplicateVoter(b.voter_id));
        }
        let mut listed = Vec::with_capacity(b.approvals.len());
        let mut seen = ProjectSet::EMPTY;
        for id in &b.approvals {
            let i = *index
                .get(id.as_str())
                .ok_or_else(|| ValidationError::UnknownProject {
                    voter: b.voter_id.clone(),
                    project: id.clone(),
                })?;
            if seen.contains(i) {
                report
                    .duplicate_approvals
                    .push((b.voter_id.clone(), id.clone()));
                continue;
            }
            seen.insert(i);
            listed.push(i);
        }
        let cost: u64 = listed.iter().map(|&i| projects[i].cost).sum();
        let approvals = if cost <= raw.budget {
            seen
        } else {
            match policy {
                ValidationPolicy::Strict => {
                    return Err(ValidationError::OverBudget {
                        voter: b.voter_id,
                        cost,
                        budget: raw.budget,
                    })
                }
                ValidationPolicy::Drop => {
                    report.dropped.push(b.voter_id);
                    continue;
                }
                ValidationPolicy::Truncate => {
                    report.truncated.push(b.voter_id.clone());
                    let mut spent = 0;
                    listed
                        .iter()
                        .take_while(|&&i| {
                            spent += projects[i].cost;
                            spent <= raw.budget
                        })
                        .copied()
                        .collect()
                }
            }
        };
        ballots.push(Ballot {
            voter_id: b.voter_id,
            approvals,
            extra: b.extra,
        });
    }
    if ballots.is_empty() {
        return Err(ValidationError::NoBallots);
    }
    Ok((
        BudgetingScenario::assemble(projects, ballots, raw.budget, raw.meta),
        report,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn three_two_two(policy: ValidationPolicy) -> Result<(BudgetingScenario, ValidationReport), ValidationError> {
        let raw = RawScenario::from_parts(
            5,
            [("x", 3), ("y", 2), ("z", 2)],
            [("v1", vec!["x", "y", "z"]), ("v2", vec!["y"])],
        );
        validate(raw, policy)
    }

    #[test]
    fn feasible_ballot_is_unchanged_under_every_policy() {
        for policy in [ValidationPolicy::Strict, ValidationPolicy::Drop, ValidationPolicy::Truncate] {
            let raw = RawScenario::from_parts(
                9,
                [("a", 4), ("b", 3)],
                [("v", vec!["a", "b"])],
            );
            let (s, report) = validate(raw, policy).unwrap();
            assert_eq!(s.set_cost(&s.ballots()[0].approvals), 7);
            assert_eq!(report.warning_count(), 0);
        }
    }

    #[test]
    fn truncate_keeps_longest_fitting_prefix() {
        let (s, report) = three_two_two(ValidationPolicy::Truncate).unwrap();
        assert_eq!(s.ids_of(&s.ballots()[0].approvals), ["x", "y"]);
        assert_eq!(report.truncated, ["v1"]);
    }

    #[test]
    fn drop_removes_offending_ballot() {
        let (s, report) = three_two_two(ValidationPolicy::Drop).unwrap();
        assert_eq!(s.num_voters(), 1);
        assert_eq!(report.dropped, ["v1"]);
    }

    #[test]
    fn strict_rejects() {
        let raw = RawScenario::from_parts(5, [("a", 6)], [("v", vec!["a"])]);
        assert_eq!(
            validate(raw, ValidationPolicy::Strict).unwrap_err(),
            ValidationError::OverBudget {
                voter: "v".into(),
                cost: 6,
                budget: 5
            }
        );
    }

    #[test]
    fn drop_everything_is_an_error() {
        let raw = RawScenario::from_parts(5, [("a", 6)], [("v", vec!["a"])]);
        assert_eq!(
            validate(raw, ValidationPolicy::Drop).unwrap_err(),
            ValidationError::NoBallots
        );
    }

    #[test]
    fn duplicates_are_merged_and_expensive_projects_flagged() {
        let raw = RawScenario::from_parts(
            5,
            [("a", 2), ("big", 9)],
            [("v", vec!["a", "a"]), ("w", vec![])],
        );
        let (s, report) = validate(raw, ValidationPolicy::Strict).unwrap();
        assert_eq!(s.ballots()[0].approvals.len(), 1);
        assert_eq!(report.duplicate_approvals, [("v".to_string(), "a".to_string())]);
        assert_eq!(report.unaffordable_projects, ["big"]);
        assert_eq!(s.num_projects(), 2);
    }

    #[test]
    fn idempotent_on_validated_scenario() {
        for policy in [ValidationPolicy::Drop, ValidationPolicy::Truncate] {
            let (s, _) = three_two_two(policy).unwrap();
            let (again, report) = validate(s.to_raw(), policy).unwrap();
            assert_eq!(again, s);
            assert_eq!(report.warning_count(), 0);
        }
    }
}
