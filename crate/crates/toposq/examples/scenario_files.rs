//! Scenario documents and model persistence: write a scenario by hand, load
//! and build it, save the model, and reload it bit-exactly.
//!
//! Run with `cargo run --example scenario_files`.

use toposq::scenario::{load_scenario, Model};
use toposq::truth::global_sections;

const SCENARIO: &str = r#"{
    "schema_version": 1,
    "name": "hand-written qubit",
    "dim": 2,
    "observables": {
        "Sz": [[[1, 0], [0, 0]], [[0, 0], [-1, 0]]],
        "Sx": [[[0, 0], [1, 0]], [[1, 0], [0, 0]]]
    },
    "contexts": {
        "Vz": ["Sz"],
        "Vx": ["Sx"]
    },
    "closure": "subalgebras",
    "propositions": {
        "SzUp": { "observable": "Sz", "intervals": [[1, 1]] }
    },
    "states": {
        "up": { "pure": [[1, 0], [0, 0]] },
        "mixed": { "density": [[[0.5, 0], [0, 0]], [[0, 0], [0.5, 0]]] }
    }
}"#;

fn main() -> toposq::Result<()> {
    let scenario = load_scenario(SCENARIO)?;
    println!(
        "loaded `{}`: dim {}, {} contexts declared",
        scenario.name,
        scenario.dim,
        scenario.generating_contexts.len()
    );

    let model = Model::build(scenario)?;
    let poset = model.presheaf.poset();
    println!(
        "built: {} contexts, {} arrows, {} characters",
        poset.len(),
        poset.strict_pairs(),
        model.presheaf.total_characters()
    );

    let dir = std::env::temp_dir().join("toposq_example");
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("qubit.model.json");
    std::fs::write(&path, model.to_document())?;
    println!("model written to {}", path.display());

    let reloaded = Model::from_document(&std::fs::read_to_string(&path)?)?;
    let same_doc = reloaded.to_document() == model.to_document();
    println!("reloaded document is byte-identical: {same_doc}");
    println!(
        "global sections before/after: {} / {}",
        global_sections(&model.presheaf).count,
        global_sections(&reloaded.presheaf).count
    );

    // invalid documents fail with field-precise diagnostics
    let broken = SCENARIO.replace("[[1, 0], [0, 0]], [[0, 0], [-1, 0]]", "[[1, 0], [1, 0]], [[0, 0], [-1, 0]]");
    match load_scenario(&broken) {
        Err(e) => println!("\nbroken observable rejected: {e}"),
        Ok(_) => println!("\nunexpected: broken scenario loaded"),
    }
    Ok(())
}
