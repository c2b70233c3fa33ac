//! Utility axiom checks over a seeded batch of random scenarios.
//!
//! cargo run --release --example axiom_checks [count] [seed]

use pb_synergy::axioms::run_utility_batch;
use pb_synergy::generate::RandomShape;
use pb_synergy::synergy::Additivity;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let count: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(200);
    let seed: u64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(42);
    for k in 1..=3 {
        let summary = run_utility_batch(seed, count, &RandomShape::default(), Additivity::Bounded(k))?;
        println!("k={k}");
        for t in &summary.tallies {
            print!("  {:<26} {:>3}/{} fail", t.axiom, t.failed, t.checked);
            if let Some((i, v)) = &t.example {
                let w = v.witness.as_ref().expect("failures carry a witness");
                print!("  e.g. scenario #{i}: {:?} {}", w.sets, w.detail);
            }
            println!();
        }
    }
    Ok(())
}
