//! How often accounting for interactions changes the winner, on the bundled
//! synthetic corpus or any directory of `.pb` files.
//!
//! cargo run --release --example synergy_impact [dir]

use std::path::PathBuf;

use pb_synergy::scenario::{parse_pabulib, validate, ValidationPolicy};
use pb_synergy::solver::{compare_with_linear, Aggregator, SolveOptions};
use pb_synergy::synergy::Additivity;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/synthetic"));
    let mut files: Vec<PathBuf> = std::fs::read_dir(&dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "pb"))
        .collect();
    files.sort();
    let mut differing = 0;
    for path in &files {
        let (scenario, _) = validate(parse_pabulib(&std::fs::read_to_string(path)?)?, ValidationPolicy::Drop)?;
        let c = compare_with_linear(&scenario, Aggregator::Sum, Additivity::Bounded(2), SolveOptions::default())?;
        differing += usize::from(c.differs);
        println!(
            "{:<14} k=1 {{{}}}  k=2 {{{}}}  moved {}",
            path.file_stem().unwrap_or_default().to_string_lossy(),
            c.linear.ids.join(","),
            c.synergy.ids.join(","),
            c.reallocated
        );
    }
    println!("{differing} of {} winners change", files.len());
    Ok(())
}
