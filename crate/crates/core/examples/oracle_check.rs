//! Branch and bound against exhaustive enumeration on random scenarios.
//!
//! cargo run --release --example oracle_check [count] [seed]

use pb_synergy::generate::{random_batch, RandomShape};
use pb_synergy::solver::{branch_and_bound, brute_force, Aggregator};
use pb_synergy::synergy::{Additivity, SynergyModel};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let count: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(20);
    let seed: u64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(7);
    let shape = RandomShape::default().with_projects(6, 12).with_voters(5, 20);
    let (mut checks, mut bnb_nodes, mut brute_nodes) = (0, 0u64, 0u64);
    for (i, scenario) in random_batch(seed, count, &shape).iter().enumerate() {
        for k in 1..=3 {
            let model = SynergyModel::build(scenario, Additivity::Bounded(k))?;
            for alpha in Aggregator::ALL {
                let bb = branch_and_bound(&model, scenario, alpha)?;
                let bf = brute_force(&model, scenario, alpha)?;
                if bb.score != bf.score || bb.bundle != bf.bundle {
                    eprintln!("#{i} k={k} {alpha}: {:?} {} vs {:?} {}", bb.ids, bb.score, bf.ids, bf.score);
                    std::process::exit(3);
                }
                checks += 1;
                bnb_nodes += bb.stats.nodes_explored;
                brute_nodes += bf.stats.nodes_explored;
            }
        }
    }
    println!("{checks} checks agree; branch and bound visited {bnb_nodes} nodes, enumeration {brute_nodes}");
    Ok(())
}
