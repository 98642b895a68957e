//! Mixed states as measures on the spectral presheaf: antitone valuations,
//! the measure axioms, generalized truth objects, and the support of a pure
//! measure.
//!
//! Run with `cargo run --example measures_mixed_states`.

use toposq::cli::{eval_proposition, parse_proposition};
use toposq::measures::{
    default_r_grid, generalized_truth_object_component, measure, support_of_measure,
    verify_measure_axioms, GeneralizedTruthObjectFamily,
};
use toposq::operators::DensityState;
use toposq::scenario::{preset, Model, StateSpec};
use toposq::truth::pseudo_state;

fn main() -> toposq::Result<()> {
    let model = Model::build(preset("qubit-zx")?)?;
    let ps = &model.presheaf;
    let mixed = DensityState::maximally_mixed(2);

    // the measure of a daseinised proposition is an antitone valuation
    let s = eval_proposition(&parse_proposition("SzUp")?, &model)?;
    let mu = measure(&mixed, &s, ps)?;
    println!("measure of SzUp in the maximally mixed state:");
    for (id, v) in mu.values() {
        println!("  {id}: {v}");
    }
    println!("antitone along inclusions: {}", mu.is_antitone(ps.poset(), 1e-9));

    // normalization and modular additivity on seeded random subobject pairs
    let report = verify_measure_axioms(&mixed, ps, 200, 42)?;
    println!(
        "\naxioms over {} pairs: normalization off by {:.2e}, additivity off by {:.2e}",
        report.samples, report.max_normalization_violation, report.max_additivity_violation
    );

    // generalized truth objects: clopen subsets of probability >= r
    let vz = ps.poset().context("Vz")?;
    let rho = DensityState::new(nalgebra::DMatrix::from_fn(2, 2, |i, j| {
        num_complex::Complex64::new(if i == j { [0.75, 0.25][i] } else { 0.0 }, 0.0)
    }))?;
    for r in [0.2, 0.8, 1.0] {
        let members = generalized_truth_object_component(&rho, r, vz, &model.scenario.tolerances)?;
        println!("\nat threshold r = {r}, {} subsets of the Vz spectrum qualify:", members.len());
        for m in &members {
            println!("  {m:?}");
        }
    }

    // the measure can be rebuilt from the whole family up to the grid step
    let family = GeneralizedTruthObjectFamily::build(&rho, ps, default_r_grid())?;
    let rebuilt = family.measure_from_family(&s)?;
    let exact = measure(&rho, &s, ps)?;
    println!(
        "\nfamily reconstruction of mu(SzUp) off by at most {:.3} (grid step 0.05)",
        rebuilt.max_abs_diff(&exact)
    );

    // for pure states the support of the measure is the pseudo-state
    if let StateSpec::Pure(up) = &model.scenario.states["up"] {
        let support = support_of_measure(&DensityState::from_pure(up), ps)?;
        println!(
            "\nsupport of the |up> measure equals its pseudo-state: {}",
            support == pseudo_state(up, ps)?
        );
    }
    Ok(())
}
