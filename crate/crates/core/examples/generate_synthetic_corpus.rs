//! Writes the planted-block corpus used by the comparison tests.
//!
//! cargo run --example generate_synthetic_corpus [out-dir] [seed] [count]

use std::path::PathBuf;

use pb_synergy::generate::synthetic_corpus;
use pb_synergy::scenario::serialize_pabulib;

/// Seed of the bundled corpus in `data/synthetic`.
const CORPUS_SEED: u64 = 2024;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let dir = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/synthetic"));
    let seed: u64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(CORPUS_SEED);
    let count: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(20);
    std::fs::create_dir_all(&dir)?;
    for (name, scenario) in synthetic_corpus(seed, count) {
        let path = dir.join(format!("{name}.pb"));
        std::fs::write(&path, serialize_pabulib(&scenario))?;
        println!("{}", path.display());
    }
    Ok(())
}
