//! Desk-scale engine for the topos formulation of quantum logic.
//!
//! Given a finite-dimensional Hilbert space and a finite family of
//! measurement contexts (abelian algebras of observables), this crate builds
//! the context poset and the spectral presheaf over it, translates
//! projections into clopen subobjects by outer daseinisation, assigns
//! sieve-valued truth values from pure states, and represents arbitrary mixed
//! states as measures on the spectral presheaf.
//!
//! Start with the runnable examples (`cargo run --example kochen_specker`,
//! `cargo run --example heyting_logic`, ...) or the `toposq` binary.

pub mod cli;
pub mod contexts;
pub mod daseinisation;
pub mod error;
pub mod measures;
pub mod operators;
pub mod random;
pub mod scenario;
pub mod spectrum;
pub mod subobjects;
pub mod suites;
pub mod truth;

pub use contexts::{ClosurePolicy, Context, ContextPoset, Sieve};
pub use error::{Error, Result};
pub use operators::{
    DensityState, IntervalUnion, Observable, Projection, PureState, Tolerances,
};
pub use spectrum::{Character, SpectralPresheaf};
pub use subobjects::ClopenSubobject;
