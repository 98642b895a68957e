//! Desk-scale state tomography: atom probabilities over an informationally
//! complete context family pin down the density matrix by least squares.
//!
//! Run with `cargo run --example state_reconstruction`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use toposq::error::Error;
use toposq::measures::{atom_probabilities, reconstruct_state, tomography};
use toposq::operators::{max_abs, Tolerances};
use toposq::random;

fn main() -> toposq::Result<()> {
    let tol = Tolerances::default();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);

    // qubit: the three Pauli eigenbases are informationally complete
    let qubit = tomography::qubit_poset(&tol)?;
    println!("qubit tomography over {:?}:", qubit.contexts().iter().map(|c| c.id()).collect::<Vec<_>>());
    for k in 0..3 {
        let rho = random::density(2, &mut rng);
        let rec = reconstruct_state(&qubit, &atom_probabilities(&rho, &qubit)?)?;
        let err = max_abs(&(rec.state.matrix() - rho.matrix()));
        println!("  sample {k}: recovery error {err:.2e}, residual {:.2e}", rec.residual);
    }

    // qutrit: the four mutually unbiased bases
    let qutrit = tomography::qutrit_poset(&tol)?;
    println!("\nqutrit tomography over {} mutually unbiased bases:", qutrit.len());
    for k in 0..3 {
        let rho = random::density(3, &mut rng);
        let rec = reconstruct_state(&qutrit, &atom_probabilities(&rho, &qutrit)?)?;
        let err = max_abs(&(rec.state.matrix() - rho.matrix()));
        println!("  sample {k}: recovery error {err:.2e}, residual {:.2e}", rec.residual);
    }

    // a single context cannot determine the off-diagonal entries
    let single = toposq::contexts::ContextPoset::build(
        &[qubit.context("Vz")?.clone()],
        toposq::contexts::ClosurePolicy::None,
        &tol,
    )?;
    let rho = random::density(2, &mut rng);
    match reconstruct_state(&single, &atom_probabilities(&rho, &single)?) {
        Err(Error::Underdetermined { rank, needed }) => {
            println!("\nVz alone: underdetermined (rank {rank} of {needed} parameters)");
        }
        other => println!("\nunexpected: {other:?}"),
    }
    Ok(())
}
