//! Solve one random scenario under every aggregator and interaction order,
//! showing how much of the tree branch and bound prunes.
//!
//! cargo run --release --example solve_all_aggregators [seed] [projects]

use pb_synergy::generate::{random_batch, RandomShape};
use pb_synergy::solver::{branch_and_bound, Aggregator};
use pb_synergy::synergy::{Additivity, SynergyModel};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let seed: u64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(1);
    let n: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(14);
    let shape = RandomShape::default().with_projects(n, n).with_voters(20, 20);
    let scenario = random_batch(seed, 1, &shape).remove(0);
    println!("{n} projects, {} voters, budget {}", scenario.num_voters(), scenario.budget());

    for k in 1..=3 {
        let model = SynergyModel::build(&scenario, Additivity::Bounded(k))?;
        for alpha in Aggregator::ALL {
            let r = branch_and_bound(&model, &scenario, alpha)?;
            println!(
                "k={k} {alpha:>4}: {{{}}} score {:.4} nodes {} pruned {}+{} of {} subsets, {:.1} ms",
                r.ids.join(","),
                r.score.decimal(),
                r.stats.nodes_explored,
                r.stats.nodes_pruned_bound,
                r.stats.nodes_pruned_budget,
                1u64 << n,
                r.wall_ms()
            );
        }
    }
    Ok(())
}
