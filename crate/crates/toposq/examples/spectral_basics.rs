//! Operator kernel basics: spectral decomposition, spectral projections for
//! propositions "A in Δ", and Born probabilities.
//!
//! Run with `cargo run --example spectral_basics`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use toposq::operators::{
    born_probability, spectral_decompose, spectral_projection, IntervalUnion, Observable,
    PureState, Tolerances,
};

fn main() -> toposq::Result<()> {
    let c = Complex64::new;
    let tol = Tolerances::default();

    let sx = Observable::new(DMatrix::from_row_slice(
        2,
        2,
        &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)],
    ))?;

    println!("spectral decomposition of sigma_x:");
    for (lambda, e) in spectral_decompose(&sx, &tol) {
        println!("  eigenvalue {lambda:+.1}, eigenprojection rank {}", e.rank());
    }

    // the proposition "Sx in [1,1]", i.e. spin-x is up
    let p_up = spectral_projection(&sx, &IntervalUnion::point(1.0), &tol);
    println!("\nprojection for `Sx in [1,1]` has rank {}", p_up.rank());

    // Born probabilities in |0>, |1>, |+>
    let states = [
        ("up", vec![c(1., 0.), c(0., 0.)]),
        ("down", vec![c(0., 0.), c(1., 0.)]),
        ("plus", vec![c(1., 0.), c(1., 0.)]),
    ];
    println!("\nBorn probability of `Sx in [1,1]`:");
    for (name, amps) in states {
        let psi = PureState::normalized(DVector::from_vec(amps))?;
        println!("  in |{name}>: {}", born_probability(&psi, &p_up)?);
    }

    // eigenvalues closer than eps_cluster merge into one eigenprojection
    let nearly = Observable::new(DMatrix::from_row_slice(
        3,
        3,
        &[
            c(1., 0.), c(0., 0.), c(0., 0.),
            c(0., 0.), c(1.0 + 1e-12, 0.), c(0., 0.),
            c(0., 0.), c(0., 0.), c(2., 0.),
        ],
    ))?;
    let merged = spectral_decompose(&nearly, &tol);
    println!(
        "\ndiag(1, 1+1e-12, 2) clusters into {} eigenprojections of ranks {:?}",
        merged.len(),
        merged.iter().map(|(_, e)| e.rank()).collect::<Vec<_>>()
    );
    Ok(())
}
