//! Pure states as pseudo-states, truth objects, and sieve-valued truth:
//! conjunction is preserved exactly, disjunction only from above.
//!
//! Run with `cargo run --example truth_values`.

use toposq::cli::{eval_proposition, parse_proposition};
use toposq::scenario::{preset, Model, StateSpec};
use toposq::truth::{pseudo_state, truth_object_component, truth_value, TruthValue};

fn main() -> toposq::Result<()> {
    let model = Model::build(preset("qubit-zx")?)?;
    let ps = &model.presheaf;
    let up = match &model.scenario.states["up"] {
        StateSpec::Pure(p) => p.clone(),
        _ => unreachable!(),
    };
    let plus = match &model.scenario.states["plus"] {
        StateSpec::Pure(p) => p.clone(),
        _ => unreachable!(),
    };

    // the pseudo-state: smallest subobject totally true in the state
    let w = pseudo_state(&up, ps)?;
    println!("pseudo-state of |up>, stage by stage:");
    for (id, chars) in w.components() {
        println!("  {id}: characters {chars:?}");
    }

    // the truth object at Vz: all local propositions true in the state
    let vz = ps.poset().context("Vz")?;
    let t = truth_object_component(&up, vz, &model.scenario.tolerances)?;
    println!("\ntruth object of |up> at Vz: {} members", t.members().len());

    // contextual truth of "spin-x up" in |up>: true only from the z-perspective
    let sx_up = eval_proposition(&parse_proposition("SxUp")?, &model)?;
    let v = truth_value(&up, &sx_up, ps)?;
    println!("\ntruth value of SxUp in |up>:");
    for (id, sieve) in v.sieves() {
        println!(
            "  at {id}: locally {}, sieve {:?}",
            if v.local_truth(id)? { "true" } else { "false" },
            sieve.members()
        );
    }

    // conjunction is preserved exactly
    let s1 = eval_proposition(&parse_proposition("SzUp")?, &model)?;
    let s2 = eval_proposition(&parse_proposition("SzDown")?, &model)?;
    let lhs = truth_value(&plus, &s1.meet(&s2)?, ps)?;
    let rhs = truth_value(&plus, &s1, ps)?.meet(&truth_value(&plus, &s2, ps)?)?;
    println!("\nv(S1 ∧ S2) = v(S1) ∧ v(S2): {}", lhs == rhs);

    // disjunction only from above: in |plus>, SzUp ∨ SzDown is totally true
    // even though neither disjunct is true at Vz — superposition in the logic
    let join_of_values = truth_value(&plus, &s1, ps)?.join(&truth_value(&plus, &s2, ps)?)?;
    let value_of_join = truth_value(&plus, &s1.join(&s2)?, ps)?;
    println!(
        "v(S1 ∨ S2) totally true: {}; v(S1) ∨ v(S2) true at Vz: {}",
        value_of_join == TruthValue::top(ps.poset()),
        join_of_values.local_truth("Vz")?
    );
    Ok(())
}
