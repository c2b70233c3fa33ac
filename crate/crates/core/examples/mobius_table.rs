//! Möbius inversion of a utility table given on every subset of three items.
//!
//! cargo run --example mobius_table

use pb_synergy::rational;
use pb_synergy::synergy::{mobius_from_utility_table, utility_from_mobius, SetFunction};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // items 1, 2, 3 are bits 0, 1, 2; values in tenths
    let table = [(0b000, 0), (0b001, 2), (0b010, 4), (0b100, 5), (0b011, 5), (0b101, 7), (0b110, 8), (0b111, 10)];
    let u = SetFunction::from_entries(3, table.map(|(mask, t)| (mask, rational(t, 10))))?;
    let m = mobius_from_utility_table(&u)?;
    for mask in 1u32..8 {
        let items: Vec<String> = (0..3).filter(|b| mask >> b & 1 == 1).map(|b| (b + 1).to_string()).collect();
        println!("{{{}}}: u = {:>5}  m = {:>5}", items.join(","), u.get(mask).to_string(), m.get(mask).to_string());
    }
    assert_eq!(utility_from_mobius(&m), u);
    Ok(())
}
