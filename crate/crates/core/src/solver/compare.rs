use num_bigint::BigInt;
use serde::Serialize;

use super::{branch_and_bound_with, Aggregator, SolveError, SolveOptions, SolveReport};
use crate::exact;
use crate::scenario::BudgetingScenario;
use crate::synergy::{Additivity, SynergyModel};
use crate::Rational;

/// Winners with and without interaction terms.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearComparison {
    pub linear: SolveReport,
    pub synergy: SolveReport,
    pub differs: bool,
    /// `cost(symmetric difference) / (2l)`: share of the budget moved.
    pub reallocated: Rational,
}

#[derive(Serialize)]
pub struct ComparisonRow {
    pub linear: Vec<String>,
    pub synergy: Vec<String>,
    pub k: String,
    pub aggregator: Aggregator,
    pub differs: bool,
    #[serde(serialize_with = "exact::serialize")]
    pub reallocated: Rational,
    pub optimal: bool,
}

impl LinearComparison {
    pub fn row(&self) -> ComparisonRow {
        ComparisonRow {
            linear: self.linear.ids.clone(),
            synergy: self.synergy.ids.clone(),
            k: self.synergy.additivity.to_string(),
            aggregator: self.synergy.aggregator,
            differs: self.differs,
            reallocated: self.reallocated.clone(),
            optimal: self.linear.optimal && self.synergy.optimal,
        }
    }
}

/// Solves under the overlap utility (k = 1) and under `additivity`.
pub fn compare_with_linear(
    scenario: &BudgetingScenario,
    alpha: Aggregator,
    additivity: Additivity,
    options: SolveOptions,
) -> Result<LinearComparison, SolveError> {
    let linear_model = SynergyModel::build(scenario, Additivity::Bounded(1))?;
    let linear = branch_and_bound_with(&linear_model, scenario, alpha, options)?;
    let model = SynergyModel::build(scenario, additivity)?;
    let synergy = branch_and_bound_with(&model, scenario, alpha, options)?;
    let moved = linear.bundle.members.symmetric_difference(&synergy.bundle.members);
    let reallocated = Rational::new(
        BigInt::from(scenario.set_cost(&moved)),
        BigInt::from(2 * scenario.budget()),
    );
    Ok(LinearComparison {
        differs: linear.bundle.members != synergy.bundle.members,
        linear,
        synergy,
        reallocated,
    })
}
