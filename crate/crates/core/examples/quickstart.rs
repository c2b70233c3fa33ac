//! Load a scenario, build the interaction model and solve it.
//!
//! cargo run --example quickstart [path.pb]

use std::path::PathBuf;

use pb_synergy::scenario::{parse_pabulib, validate, ValidationPolicy};
use pb_synergy::solver::{branch_and_bound, Aggregator};
use pb_synergy::synergy::{Additivity, SynergyModel};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/example1.pb"));
    let raw = parse_pabulib(&std::fs::read_to_string(&path)?)?;
    let (scenario, _) = validate(raw, ValidationPolicy::Drop)?;
    println!(
        "{}: {} projects, {} voters, budget {}",
        path.display(),
        scenario.num_projects(),
        scenario.num_voters(),
        scenario.budget()
    );

    let model = SynergyModel::build(&scenario, Additivity::Bounded(2))?;
    let ab = scenario.set_of(&["A", "B"]).ok();
    if let Some(ab) = ab {
        println!("u({{A,B}}) = {}  (costs sum to 5)", model.utility_of(&ab));
    }
    for alpha in Aggregator::ALL {
        let r = branch_and_bound(&model, &scenario, alpha)?;
        println!("{alpha:>4}: {{{}}} cost {} score {}", r.ids.join(", "), r.bundle.cost, r.score);
    }
    Ok(())
}
