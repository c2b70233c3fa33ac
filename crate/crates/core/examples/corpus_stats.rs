//! Cost distribution relative to the budget and ballot budget utilization.
//!
//! cargo run --example corpus_stats [file-or-dir ...]

use std::path::PathBuf;

use pb_synergy::exact::to_f64;
use pb_synergy::scenario::{budget_utilization, cost_decile_vector, parse_pabulib, validate, ValidationPolicy};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data");
    let mut inputs: Vec<PathBuf> = std::env::args().skip(1).map(PathBuf::from).collect();
    if inputs.is_empty() {
        inputs = vec![root.join("example1.pb"), root.join("synthetic")];
    }
    let mut files = Vec::new();
    for input in inputs {
        if input.is_dir() {
            let mut found: Vec<PathBuf> = std::fs::read_dir(&input)?.filter_map(|e| e.ok().map(|e| e.path())).collect();
            found.sort();
            files.extend(found.into_iter().filter(|p| p.extension().is_some_and(|x| x == "pb")));
        } else {
            files.push(input);
        }
    }
    for path in files {
        let (scenario, _) = validate(parse_pabulib(&std::fs::read_to_string(&path)?)?, ValidationPolicy::Drop)?;
        let deciles: Vec<String> = cost_decile_vector(&scenario).iter().map(|d| format!("{:.2}", to_f64(d))).collect();
        let u = budget_utilization(&scenario);
        println!(
            "{:<14} [{}] utilization {:.3}",
            path.file_stem().unwrap_or_default().to_string_lossy(),
            deciles.join(" "),
            to_f64(&u.mean)
        );
    }
    Ok(())
}
