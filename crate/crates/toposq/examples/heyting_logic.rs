//! The Heyting algebra of clopen subobjects: distributive lattice operations,
//! material implication, intuitionistic negation, and a strict failure of the
//! law of excluded middle.
//!
//! Run with `cargo run --example heyting_logic`.

use toposq::scenario::{preset, Model};
use toposq::subobjects::{enumerate_clopen, ClopenSubobject};

fn main() -> toposq::Result<()> {
    let model = Model::build(preset("qutrit-chain")?)?;
    let ps = &model.presheaf;

    let all = enumerate_clopen(ps)?;
    println!("the qutrit chain carries {} clopen subobjects", all.len());

    // distributivity spot check
    let (a, b, c) = (&all[17], &all[42], &all[71]);
    let lhs = a.meet(&b.join(c)?)?;
    let rhs = a.meet(b)?.join(&a.meet(c)?)?;
    println!("distributivity a∧(b∨c) = (a∧b)∨(a∧c): {}", lhs == rhs);

    // the Heyting adjunction defines implication
    let imp = b.implies(c, ps)?;
    println!(
        "adjunction instance: a∧b ≤ c is {}, a ≤ (b ⇒ c) is {}",
        a.meet(b)?.leq(c)?,
        a.leq(&imp)?
    );

    // a strict excluded-middle failure: full at the coarsenings, one
    // character at the top context
    let mut components = std::collections::BTreeMap::new();
    for ctx in ps.poset().contexts() {
        if ctx.id() == "V3" {
            components.insert(ctx.id().to_string(), [0usize].into_iter().collect());
        } else {
            components.insert(ctx.id().to_string(), (0..ctx.num_atoms()).collect());
        }
    }
    let s = ClopenSubobject::from_components(ps, components)?;
    let not_s = s.negate(ps)?;
    let lem = s.join(&not_s)?;
    println!("\nwitness subobject S has V3-component {:?}", s.component("V3")?);
    println!("¬S is the empty subobject: {}", not_s.is_empty_subobject());
    println!(
        "S ∨ ¬S misses {} of 3 characters at V3: excluded middle fails strictly",
        3 - lem.component("V3")?.len()
    );

    // double negation is inflationary but not the identity
    let mut strict = 0;
    for s in &all {
        let nn = s.negate(ps)?.negate(ps)?;
        assert!(s.leq(&nn)?);
        if &nn != s {
            strict += 1;
        }
    }
    println!(
        "\nS ≤ ¬¬S for all {} subobjects; strict for {strict} of them",
        all.len()
    );
    Ok(())
}
