//! Seeded random scenarios for tests, examples and the bundled corpus.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::scenario::{validate, BudgetingScenario, RawScenario, ValidationPolicy};

/// Shape of a random scenario. Costs are drawn from `1..=budget`; each voter
/// aims to spend a uniform share of the budget in `spend` and approves
/// projects in random order while they fit that target.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomShape {
    pub projects: (usize, usize),
    pub voters: (usize, usize),
    pub budget: (u64, u64),
    pub spend: (f64, f64),
}

impl Default for RandomShape {
    fn default() -> Self {
        RandomShape {
            projects: (3, 8),
            voters: (2, 12),
            budget: (6, 30),
            spend: (0.4, 1.0),
        }
    }
}

impl RandomShape {
    pub fn with_projects(mut self, lo: usize, hi: usize) -> Self {
        self.projects = (lo, hi);
        self
    }

    pub fn with_voters(mut self, lo: usize, hi: usize) -> Self {
        self.voters = (lo, hi);
        self
    }

    pub fn with_spend(mut self, lo: f64, hi: f64) -> Self {
        self.spend = (lo, hi);
        self
    }
}

pub fn project_id(i: usize) -> String {
    format!("p{i:02}")
}

/// Draws one scenario. Ballots respect the budget by construction.
pub fn random_scenario(rng: &mut impl Rng, shape: &RandomShape) -> BudgetingScenario {
    let n = rng.gen_range(shape.projects.0..=shape.projects.1);
    let v = rng.gen_range(shape.voters.0..=shape.voters.1);
    let budget = rng.gen_range(shape.budget.0..=shape.budget.1);
    let costs: Vec<u64> = (0..n).map(|_| rng.gen_range(1..=budget)).collect();
    let mut ballots = Vec::with_capacity(v);
    for voter in 0..v {
        let target = (rng.gen_range(shape.spend.0..=shape.spend.1) * budget as f64).round() as u64;
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);
        let mut spent = 0;
        let mut approved = Vec::new();
        for a in order {
            if spent + costs[a] <= target.max(1) {
                spent += costs[a];
                approved.push(project_id(a));
            }
        }
        ballots.push((format!("v{voter:02}"), approved));
    }
    let projects: Vec<(String, u64)> = costs
        .iter()
        .enumerate()
        .map(|(i, &c)| (project_id(i), c))
        .collect();
    let raw = RawScenario::from_parts(budget, projects, ballots);
    validate(raw, ValidationPolicy::Strict)
        .expect("generated ballots fit the budget")
        .0
}

/// `count` scenarios from one seed.
pub fn random_batch(seed: u64, count: usize, shape: &RandomShape) -> Vec<BudgetingScenario> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_scenario(&mut rng, shape)).collect()
}

/// A scenario where a block of cheap projects is approved together by one
/// faction while a rival faction backs a single project of the same total
/// cost. Counting costs alone favours the rival; co-approval of the block
/// reverses that when the faction sizes are close.
pub fn planted_block_scenario(rng: &mut impl Rng) -> BudgetingScenario {
    let block = rng.gen_range(2..=3usize);
    let part_cost = rng.gen_range(1..=3u64);
    let block_cost = part_cost * block as u64;
    let fillers = rng.gen_range(2..=5usize);
    // too small to fund the block and the rival together
    let budget = block_cost + rng.gen_range(1..block_cost);
    let faction = rng.gen_range(4..=8usize);
    let rivals = faction + rng.gen_range(0..=1usize);
    let casual = rng.gen_range(0..=3usize);

    let mut projects: Vec<(String, u64)> = (0..block)
        .map(|i| (format!("block{i}"), part_cost))
        .collect();
    projects.push(("rival".to_string(), block_cost));
    for i in 0..fillers {
        projects.push((format!("filler{i}"), rng.gen_range(budget - block_cost + 1..=budget)));
    }

    let mut ballots: Vec<(String, Vec<String>)> = Vec::new();
    let block_ids: Vec<String> = (0..block).map(|i| format!("block{i}")).collect();
    for i in 0..faction {
        ballots.push((format!("f{i:02}"), block_ids.clone()));
    }
    for i in 0..rivals {
        ballots.push((format!("r{i:02}"), vec!["rival".to_string()]));
    }
    for i in 0..casual {
        let pick = format!("filler{}", rng.gen_range(0..fillers));
        ballots.push((format!("c{i:02}"), vec![pick]));
    }
    let mut raw = RawScenario::from_parts(budget, projects, ballots);
    raw.meta = BTreeMap::from([
        ("description".to_string(), "planted block".to_string()),
        ("vote_type".to_string(), "approval".to_string()),
    ]);
    validate(raw, ValidationPolicy::Strict)
        .expect("planted ballots fit the budget")
        .0
}

/// Named planted-block scenarios, `synthetic_00` onward.
pub fn synthetic_corpus(seed: u64, count: usize) -> Vec<(String, BudgetingScenario)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| (format!("synthetic_{i:02}"), planted_block_scenario(&mut rng)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::budget_utilization;
    use crate::exact::to_f64;

    #[test]
    fn batches_are_reproducible() {
        let shape = RandomShape::default();
        assert_eq!(random_batch(7, 5, &shape), random_batch(7, 5, &shape));
        assert_ne!(random_batch(7, 5, &shape), random_batch(8, 5, &shape));
    }

    #[test]
    fn utilization_is_near_target() {
        let batch = random_batch(1, 100, &RandomShape::default());
        let mean: f64 = batch
            .iter()
            .map(|s| to_f64(&budget_utilization(s).mean))
            .sum::<f64>()
            / batch.len() as f64;
        assert!((0.5..0.85).contains(&mean), "mean utilization {mean}");
    }

    #[test]
    fn planted_corpus_is_valid() {
        for (name, s) in synthetic_corpus(3, 10) {
            assert!(name.starts_with("synthetic_"));
            assert!(s.ballots().iter().all(|b| s.set_cost(&b.approvals) <= s.budget()));
        }
    }
}
