//! Contexts and the context poset: commuting generators, subalgebra
//! enumeration, inclusion order, and sieves.
//!
//! Run with `cargo run --example context_poset`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use toposq::contexts::{ClosurePolicy, Context, ContextPoset};
use toposq::operators::{Projection, Tolerances};

fn main() -> toposq::Result<()> {
    let c = Complex64::new;
    let tol = Tolerances::default();

    // the diagonal qutrit algebra, generated by two of its atoms
    let e1 = Projection::new(DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
        c(1., 0.),
        c(0., 0.),
        c(0., 0.),
    ])))?;
    let e2 = Projection::new(DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
        c(0., 0.),
        c(1., 0.),
        c(0., 0.),
    ])))?;
    let v3 = Context::generate("V3", &[e1, e2], &tol)?;
    println!("context V3 has {} atoms", v3.num_atoms());

    // every coarse-graining of V3 (partitions of its atoms into >= 2 blocks)
    println!("\nsubalgebras of V3:");
    for sub in v3.enumerate_subalgebras() {
        println!("  {} with {} atoms", sub.id(), sub.num_atoms());
    }

    // closing under subalgebras yields the chain poset
    let poset = ContextPoset::build(&[v3], ClosurePolicy::Subalgebras, &tol)?;
    println!(
        "\nposet: {} contexts, {} strict inclusion pairs",
        poset.len(),
        poset.strict_pairs()
    );
    for ctx in poset.contexts() {
        let below: Vec<&str> = poset
            .downset_idx(poset.index_of(ctx.id())?)
            .into_iter()
            .map(|i| poset.context_at(i).id())
            .collect();
        println!("  down-set of {}: {:?}", ctx.id(), below);
    }

    // the maximal sieve on V3 and its push-down to a coarsening
    let sieve = poset.principal_sieve("V3")?;
    println!("\nmaximal sieve on V3 has {} members", sieve.members().len());
    let w = poset
        .contexts()
        .iter()
        .find(|ctx| ctx.id() != "V3")
        .expect("coarsenings exist");
    let pushed = sieve.intersect_down(&poset, w.id())?;
    println!(
        "pushed down to {}: {} members (the maximal sieve there)",
        w.id(),
        pushed.members().len()
    );
    Ok(())
}
