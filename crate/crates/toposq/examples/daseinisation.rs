//! Outer daseinisation: approximating a projection from above in every
//! context, and assembling the approximations into a clopen subobject.
//!
//! The proposition "spin-z is up" is exact in the z-context but must be
//! coarse-grained to the trivially-true proposition in the x-context; the
//! stage-wise family of coarse-grainings is the topos representative of the
//! proposition.
//!
//! Run with `cargo run --example daseinisation`.

use toposq::cli::{eval_proposition, parse_proposition};
use toposq::daseinisation::{daseinise, daseinise_at};
use toposq::operators::spectral_projection;
use toposq::scenario::{preset, Model};

fn main() -> toposq::Result<()> {
    let model = Model::build(preset("qubit-zx")?)?;
    let scen = &model.scenario;
    let tol = &scen.tolerances;

    let sz_up = spectral_projection(
        &scen.observables["Sz"],
        &scen.propositions["SzUp"].intervals,
        tol,
    );
    println!("`Sz in [1,1]` is a rank-{} projection", sz_up.rank());

    println!("\nlocal approximations (smallest dominating block per context):");
    for ctx in model.presheaf.poset().contexts() {
        let local = daseinise_at(&sz_up, ctx, tol)?;
        println!(
            "  at {}: rank {} ({})",
            ctx.id(),
            local.rank(),
            if local.rank() == ctx.dim() {
                "coarse-grained to trivially true"
            } else {
                "the projection itself"
            }
        );
    }

    let subobject = daseinise(&sz_up, &model.presheaf)?;
    println!("\nthe induced clopen subobject, stage by stage:");
    for (id, chars) in subobject.components() {
        println!("  {id}: characters {chars:?}");
    }

    // compound propositions are evaluated in the subobject algebra
    let meet = eval_proposition(&parse_proposition("SzUp & SxUp")?, &model)?;
    println!("\n`SzUp & SxUp` (incompatible spin directions), stage by stage:");
    for (id, chars) in meet.components() {
        println!("  {id}: characters {chars:?}");
    }
    println!("the conjunction is defined globally even though no single context carries it");
    Ok(())
}
