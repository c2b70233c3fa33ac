//! Small scenarios on which a monotonicity axiom fails. Winners are always
//! computed by exhaustive enumeration; only the violation is asserted.

use num_bigint::BigInt;
use serde::Serialize;

use super::{AxiomError, AxiomVerdict, Witness};
use crate::scenario::{validate, BudgetingScenario, RawScenario, ValidationPolicy};
use crate::solver::{brute_force, Aggregator};
use crate::synergy::{Additivity, SynergyModel};
use crate::Rational;

pub const DISCOUNT_MONOTONICITY: &str = "discount monotonicity";
pub const LIMIT_MONOTONICITY: &str = "limit monotonicity";
pub const MERGING_MONOTONICITY: &str = "merging monotonicity";

/// Additivity bound under which the fixtures are solved.
pub const FIXTURE_ADDITIVITY: Additivity = Additivity::Bounded(2);

/// Faction size of the Sum merging fixture: the block of two unit-cost
/// projects is backed by this many voters, a single project of cost 2 by one
/// voter more.
pub const MERGING_SUM_FACTION: u64 = 7;

#[derive(Debug, Clone, Serialize)]
pub struct FixtureReport {
    pub name: String,
    pub aggregator: Aggregator,
    pub before: Vec<String>,
    pub after: Vec<String>,
    /// `holds == false` means the fixture exhibits the violation.
    pub verdict: AxiomVerdict,
}

impl FixtureReport {
    pub fn exhibits_violation(&self) -> bool {
        !self.verdict.holds
    }
}

fn build(budget: u64, projects: &[(&str, u64)], ballots: &[(String, Vec<&str>)]) -> BudgetingScenario {
    let raw = RawScenario::from_parts(
        budget,
        projects.iter().map(|&(id, c)| (id.to_string(), c)),
        ballots
            .iter()
            .map(|(v, a)| (v.clone(), a.iter().map(|s| s.to_string()).collect())),
    );
    validate(raw, ValidationPolicy::Strict)
        .expect("fixture scenarios are valid")
        .0
}

fn voters(prefix: &str, count: u64, approvals: &[&'static str]) -> Vec<(String, Vec<&'static str>)> {
    (0..count)
        .map(|i| (format!("{prefix}{i}"), approvals.to_vec()))
        .collect()
}

fn winner(scenario: &BudgetingScenario, alpha: Aggregator) -> Result<Vec<String>, AxiomError> {
    let model = SynergyModel::build(scenario, FIXTURE_ADDITIVITY)?;
    Ok(brute_force(&model, scenario, alpha)?.ids)
}

/// Costs x1=4, x2=3, y=4 with budget 8 and voters {x1,x2} and {y}; the
/// second scenario discounts x1 to 2.
pub fn discount_fixture() -> (BudgetingScenario, BudgetingScenario) {
    let ballots = [voters("a", 1, &["x1", "x2"]), voters("b", 1, &["y"])].concat();
    (
        build(8, &[("x1", 4), ("x2", 3), ("y", 4)], &ballots),
        build(8, &[("x1", 2), ("x2", 3), ("y", 4)], &ballots),
    )
}

/// Costs 2, 5, 6 with one voter per project; the budget grows from 6 to 7.
pub fn limit_fixture_sum() -> (BudgetingScenario, BudgetingScenario) {
    let projects = [("x1", 2), ("x2", 5), ("x3", 6)];
    let ballots = [voters("a", 1, &["x1"]), voters("b", 1, &["x2"]), voters("c", 1, &["x3"])].concat();
    (build(6, &projects, &ballots), build(7, &projects, &ballots))
}

/// Costs 1, 2, 3 with voters {x1,x2} and {x3}; the budget grows from 4 to 5.
pub fn limit_fixture_min_prod() -> (BudgetingScenario, BudgetingScenario) {
    let projects = [("x1", 1), ("x2", 2), ("x3", 3)];
    let ballots = [voters("a", 1, &["x1", "x2"]), voters("b", 1, &["x3"])].concat();
    (build(4, &projects, &ballots), build(5, &projects, &ballots))
}

/// Total utility the block of two unit-cost projects gains over its cost
/// per faction voter when `faction` voters back it and `faction + 1` back
/// the rival: `2·(r − r²)` with `r = faction / (2·faction + 1)`.
pub fn merging_gain(faction: u64) -> Rational {
    let r = Rational::new(BigInt::from(faction), BigInt::from(2 * faction + 1));
    (r.clone() - r.clone() * r) * Rational::from_integer(BigInt::from(2))
}

/// Whether `faction` voters make the block beat the rival under Sum:
/// `faction · (2 + gain) > (faction + 1) · 2`.
fn block_wins(faction: u64) -> bool {
    let two = Rational::from_integer(BigInt::from(2));
    Rational::from_integer(BigInt::from(faction)) * (two.clone() + merging_gain(faction))
        > Rational::from_integer(BigInt::from(faction + 1)) * two
}

/// Smallest faction for which the block beats the rival.
pub fn smallest_merging_faction() -> u64 {
    (1..).find(|&f| block_wins(f)).expect("the gain grows without bound")
}

/// Merging under Sum: x1, x2 of cost 1 backed by `faction` voters against y
/// of cost 2 backed by `faction + 1`, budget 2. The second scenario merges
/// x1 and x2 into `x`.
pub fn merging_fixture_sum(faction: u64) -> Result<(BudgetingScenario, BudgetingScenario), AxiomError> {
    if !block_wins(faction) {
        return Err(AxiomError::Precondition(format!(
            "{faction} voters do not make the block win"
        )));
    }
    let rivals = voters("b", faction + 1, &["y"]);
    let before = build(
        2,
        &[("x1", 1), ("x2", 1), ("y", 2)],
        &[voters("a", faction, &["x1", "x2"]), rivals.clone()].concat(),
    );
    let after = build(2, &[("x", 2), ("y", 2)], &[voters("a", faction, &["x"]), rivals].concat());
    Ok((before, after))
}

/// Merging under Min and Product: x1..x4 of cost 1 approved by one voter, y
/// of cost 4 by another, budget 6. The second scenario merges x1 and x2
/// into `X` of cost 2.
pub fn merging_fixture_min_prod() -> (BudgetingScenario, BudgetingScenario) {
    let before = build(
        6,
        &[("x1", 1), ("x2", 1), ("x3", 1), ("x4", 1), ("y", 4)],
        &[voters("a", 1, &["x1", "x2", "x3", "x4"]), voters("b", 1, &["y"])].concat(),
    );
    let after = build(
        6,
        &[("X", 2), ("x3", 1), ("x4", 1), ("y", 4)],
        &[voters("a", 1, &["X", "x3", "x4"]), voters("b", 1, &["y"])].concat(),
    );
    (before, after)
}

fn report(
    name: &str,
    axiom: &str,
    alpha: Aggregator,
    before: Vec<String>,
    after: Vec<String>,
    lost: Vec<String>,
) -> FixtureReport {
    let universe = format!("{name} fixture, {alpha}, k={FIXTURE_ADDITIVITY}");
    let verdict = if lost.is_empty() {
        AxiomVerdict::pass(axiom, universe)
    } else {
        AxiomVerdict::fail(
            axiom,
            universe,
            Witness {
                sets: vec![before.clone(), after.clone(), lost],
                detail: "a funded project left the winner".to_string(),
            },
        )
    };
    FixtureReport {
        name: name.to_string(),
        aggregator: alpha,
        before,
        after,
        verdict,
    }
}

fn discount(alpha: Aggregator) -> Result<FixtureReport, AxiomError> {
    let (e, e2) = discount_fixture();
    let (before, after) = (winner(&e, alpha)?, winner(&e2, alpha)?);
    let lost = if before.iter().any(|p| p == "x1") && !after.iter().any(|p| p == "x1") {
        vec!["x1".to_string()]
    } else {
        Vec::new()
    };
    Ok(report("discount", DISCOUNT_MONOTONICITY, alpha, before, after, lost))
}

fn limit(alpha: Aggregator) -> Result<FixtureReport, AxiomError> {
    let (e, e2) = match alpha {
        Aggregator::Sum => limit_fixture_sum(),
        _ => limit_fixture_min_prod(),
    };
    let (before, after) = (winner(&e, alpha)?, winner(&e2, alpha)?);
    let lost = before.iter().filter(|p| !after.contains(p)).cloned().collect();
    Ok(report("limit", LIMIT_MONOTONICITY, alpha, before, after, lost))
}

fn merging(alpha: Aggregator) -> Result<FixtureReport, AxiomError> {
    let ((e, e2), parts, merged) = match alpha {
        Aggregator::Sum => (merging_fixture_sum(MERGING_SUM_FACTION)?, ["x1", "x2"], "x"),
        _ => (merging_fixture_min_prod(), ["x1", "x2"], "X"),
    };
    let before = winner(&e, alpha)?;
    let after = winner(&e2, alpha)?;
    let funded = parts.iter().all(|p| before.iter().any(|b| b == p));
    if !funded {
        // the merged set must come from the winner for the axiom to apply
        return Ok(report("merging", MERGING_MONOTONICITY, alpha, before, after, Vec::new()));
    }
    let lost = if after.iter().any(|p| p == merged) {
        Vec::new()
    } else {
        vec![merged.to_string()]
    };
    Ok(report("merging", MERGING_MONOTONICITY, alpha, before, after, lost))
}

/// Runs the discount, limit and merging fixtures for each aggregator.
pub fn run_counterexample_fixtures(alphas: &[Aggregator]) -> Result<Vec<FixtureReport>, AxiomError> {
    let mut out = Vec::new();
    for &alpha in alphas {
        out.push(discount(alpha)?);
        out.push(limit(alpha)?);
        out.push(merging(alpha)?);
    }
    Ok(out)
}
