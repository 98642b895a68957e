//! Global sections of the spectral presheaf. Independent contexts multiply
//! freely, a chain is pinned by its top context, and the Peres-Mermin square
//! admits no section at all: the Kochen-Specker obstruction.
//!
//! Run with `cargo run --example kochen_specker`.

use std::time::Instant;

use toposq::scenario::{preset, Model};
use toposq::truth::global_sections;

fn main() -> toposq::Result<()> {
    for name in ["qubit-zx", "qutrit-chain", "mermin-square"] {
        let model = Model::build(preset(name)?)?;
        let poset = model.presheaf.poset();
        let start = Instant::now();
        let sections = global_sections(&model.presheaf);
        let elapsed = start.elapsed().as_secs_f64() * 1e3;
        println!(
            "{name}: {} contexts, {} global sections ({elapsed:.1} ms)",
            poset.len(),
            sections.count
        );
        match sections.least {
            Some(least) => {
                let shown: Vec<String> = least
                    .iter()
                    .take(4)
                    .map(|(id, atom)| format!("{id}->{atom}"))
                    .collect();
                println!("  least section starts {:?}", shown);
            }
            None => {
                println!("  no consistent choice of one character per context exists:");
                println!("  a character of a row/column context fixes ±1 values whose");
                println!("  product is forced to +1 on rows but -1 on the third column");
            }
        }
    }
    Ok(())
}
