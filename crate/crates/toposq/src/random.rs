//! Seeded random operators and states for property suites.
//!
//! Everything here is deterministic given the RNG, so suites that take a seed
//! reproduce their witnesses exactly.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;

use crate::operators::{CMat, CVec, DensityState, Projection, PureState};

fn gaussian(rng: &mut impl Rng) -> f64 {
    // Box-Muller
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

fn ginibre(dim: usize, rng: &mut impl Rng) -> CMat {
    DMatrix::from_fn(dim, dim, |_, _| Complex64::new(gaussian(rng), gaussian(rng)))
}

/// Haar-ish random unitary from the QR factorization of a Ginibre matrix.
pub fn unitary(dim: usize, rng: &mut impl Rng) -> CMat {
    ginibre(dim, rng).qr().q()
}

pub fn pure_state(dim: usize, rng: &mut impl Rng) -> PureState {
    let v: CVec = DVector::from_fn(dim, |_, _| Complex64::new(gaussian(rng), gaussian(rng)));
    PureState::normalized(v).expect("gaussian vector is nonzero")
}

/// Random projection of the given rank (1 ≤ rank < dim for nontrivial ones).
pub fn projection(dim: usize, rank: usize, rng: &mut impl Rng) -> Projection {
    assert!(rank <= dim);
    let u = unitary(dim, rng);
    let mut m = CMat::zeros(dim, dim);
    for k in 0..rank {
        let col = u.column(k).into_owned();
        m += &col * col.adjoint();
    }
    Projection::from_matrix_unchecked(m)
}

/// Random projection with rank drawn uniformly from 1..dim.
pub fn proper_projection(dim: usize, rng: &mut impl Rng) -> Projection {
    let rank = rng.gen_range(1..dim);
    projection(dim, rank, rng)
}

/// Random full-rank density matrix (normalized Wishart).
pub fn density(dim: usize, rng: &mut impl Rng) -> DensityState {
    let g = ginibre(dim, rng);
    let w = &g * g.adjoint();
    let tr = w.trace().re;
    DensityState::new(w.map(|z| z / tr)).expect("wishart matrix is a valid density")
}
