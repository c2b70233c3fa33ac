//! Scenarios where a small perturbation pushes a funded project out of the
//! winner: a price cut, a larger budget, or merging two funded projects.
//!
//! cargo run --example proof_fixtures

use pb_synergy::axioms::{merging_gain, run_counterexample_fixtures, smallest_merging_faction, MERGING_SUM_FACTION};
use pb_synergy::solver::Aggregator;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!(
        "merging: gain per block voter at {MERGING_SUM_FACTION} voters is {}; smallest winning faction {}",
        merging_gain(MERGING_SUM_FACTION),
        smallest_merging_faction()
    );
    for f in run_counterexample_fixtures(&Aggregator::ALL)? {
        let lost = f.verdict.witness.as_ref().map(|w| w.sets[2].join(",")).unwrap_or_default();
        println!(
            "{:<9} {:>4}: {{{}}} -> {{{}}}  {}",
            f.name,
            f.aggregator.to_string(),
            f.before.join(","),
            f.after.join(","),
            if f.exhibits_violation() { format!("{} violated, lost {lost}", f.verdict.axiom) } else { "no violation".into() }
        );
    }
    Ok(())
}
