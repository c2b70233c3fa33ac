//! Rank co-approved project sets by their interaction term.
//!
//! cargo run --example detect_interactions [path.pb] [k]

use std::path::PathBuf;

use pb_synergy::scenario::{parse_pabulib, validate, ValidationPolicy};
use pb_synergy::synergy::{interaction_report, Additivity, SynergyModel};
use pb_synergy::Rational;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let path = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/example1.pb"));
    let k: Additivity = args.next().as_deref().unwrap_or("3").parse()?;
    let (scenario, _) = validate(parse_pabulib(&std::fs::read_to_string(path)?)?, ValidationPolicy::Drop)?;
    let model = SynergyModel::build(&scenario, k)?;

    let records = interaction_report(&model, &scenario, k.limit(), &Rational::default())?;
    println!("{:<16} {:>10} {:>10} {:>12}  class", "set", "rate", "expected", "transform");
    for r in records {
        println!(
            "{:<16} {:>10} {:>10} {:>12}  {}",
            format!("{{{}}}", r.subset.join(",")),
            r.rate.to_string(),
            r.expected_rate.to_string(),
            r.transform.to_string(),
            r.classification.as_str()
        );
    }
    Ok(())
}
