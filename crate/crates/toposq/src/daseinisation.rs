//! Outer daseinisation of projections.
//!
//! Locally, δᵒ_V(P̂) is the least projection of the context V above P̂; it is
//! the sum of those atoms that do not annihilate P̂ (Q̂ ≥ P̂ iff (1̂−Q̂)P̂ = 0).
//! Globally the local approximations assemble into a clopen subobject of the
//! spectral presheaf, the translation of the projection into the topos form
//! of the logic.

use std::collections::{BTreeMap, BTreeSet};

use crate::contexts::Context;
use crate::error::{Error, Result};
use crate::operators::{max_abs, Projection, Tolerances};
use crate::spectrum::SpectralPresheaf;
use crate::subobjects::ClopenSubobject;

/// Atom indices of the least block of `ctx` dominating `p`.
pub fn daseinise_at_indices(
    p: &Projection,
    ctx: &Context,
    tol: &Tolerances,
) -> Result<BTreeSet<usize>> {
    if p.dim() != ctx.dim() {
        return Err(Error::DimensionMismatch(p.dim(), ctx.dim()));
    }
    Ok(ctx
        .atoms()
        .iter()
        .enumerate()
        .filter(|(_, a)| max_abs(&(a.matrix() * p.matrix())) > tol.eps_num)
        .map(|(i, _)| i)
        .collect())
}

/// The local approximation δᵒ_V(P̂) itself.
pub fn daseinise_at(p: &Projection, ctx: &Context, tol: &Tolerances) -> Result<Projection> {
    Ok(ctx.block(daseinise_at_indices(p, ctx, tol)?))
}

/// The global daseinisation δ̲(P̂): stage-wise α(δᵒ_V(P̂)) over the poset.
pub fn daseinise(p: &Projection, ps: &SpectralPresheaf) -> Result<ClopenSubobject> {
    if p.dim() != ps.dim() {
        return Err(Error::DimensionMismatch(p.dim(), ps.dim()));
    }
    let tol = ps.tolerances();
    let mut components: BTreeMap<String, BTreeSet<usize>> = BTreeMap::new();
    for ctx in ps.poset().contexts() {
        components.insert(ctx.id().to_string(), daseinise_at_indices(p, ctx, tol)?);
    }
    Ok(ClopenSubobject::from_components_unchecked(components))
}
