//! Gel'fand spectra of contexts and the spectral presheaf over the poset.
//!
//! On a finite abelian algebra the spectrum is discrete: one character per
//! atom, evaluating to 1 exactly on the projections dominating that atom.
//! Restriction along an inclusion follows the poset's refinement maps, which
//! makes character evaluation and restriction purely order-theoretic.

use serde::{Deserialize, Serialize};

use crate::contexts::{Context, ContextPoset};
use crate::error::{Error, Result};
use crate::operators::{
    projection_leq, projections_orthogonal, Observable, Projection, Tolerances,
};

/// A point of a context's Gel'fand spectrum, identified by its atom.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Character {
    context: String,
    atom_index: usize,
}

impl Character {
    pub fn new(context: impl Into<String>, atom_index: usize) -> Self {
        Character {
            context: context.into(),
            atom_index,
        }
    }

    pub fn context(&self) -> &str {
        &self.context
    }

    pub fn atom_index(&self) -> usize {
        self.atom_index
    }
}

/// The spectral presheaf: all local spectra plus the restriction maps
/// λ ↦ λ|_{V'} induced by the poset.
#[derive(Debug, Clone)]
pub struct SpectralPresheaf {
    poset: ContextPoset,
}

impl SpectralPresheaf {
    pub fn new(poset: ContextPoset) -> Self {
        SpectralPresheaf { poset }
    }

    pub fn poset(&self) -> &ContextPoset {
        &self.poset
    }

    pub fn dim(&self) -> usize {
        self.poset.dim()
    }

    pub fn tolerances(&self) -> &Tolerances {
        self.poset.tolerances()
    }

    /// The spectrum of a context: one character per atom.
    pub fn spectrum(&self, id: &str) -> Result<Vec<Character>> {
        let ctx = self.poset.context(id)?;
        Ok((0..ctx.num_atoms()).map(|i| Character::new(id, i)).collect())
    }

    pub fn spectrum_size(&self, id: &str) -> Result<usize> {
        Ok(self.poset.context(id)?.num_atoms())
    }

    /// Sum over all contexts of their spectrum sizes.
    pub fn total_characters(&self) -> usize {
        self.poset.contexts().iter().map(|c| c.num_atoms()).sum()
    }

    /// λ(P̂) for a projection of λ's context: true iff atom(λ) ≤ P̂. Rejects
    /// operators that are not block sums of the context's atoms.
    pub fn evaluate(&self, lambda: &Character, p: &Projection) -> Result<bool> {
        let ctx = self.poset.context(lambda.context())?;
        block_membership(ctx, p, self.tolerances())?
            .get(lambda.atom_index())
            .copied()
            .ok_or_else(|| Error::UnknownContext(lambda.context().to_string()))
    }

    /// λ ↦ λ|_{V'} along `lower ≤ context(λ)`.
    pub fn restrict(&self, lambda: &Character, lower: &str) -> Result<Character> {
        let upper = self.poset.index_of(lambda.context())?;
        let low = self.poset.index_of(lower)?;
        let map = self.poset.atom_map_idx(low, upper)?;
        Ok(Character::new(lower, map[lambda.atom_index()]))
    }

    /// Fast index-level restriction used by hot loops.
    pub(crate) fn restrict_index(&self, lower: usize, upper: usize, atom: usize) -> Result<usize> {
        Ok(self.poset.atom_map_idx(lower, upper)?[atom])
    }

    /// The Gel'fand transform value λ(Â) for an observable of λ's context,
    /// i.e. the coefficient of λ's atom in Â = Σ_i a_i·atom_i.
    pub fn gelfand_transform(&self, lambda: &Character, a: &Observable) -> Result<f64> {
        let ctx = self.poset.context(lambda.context())?;
        if a.dim() != ctx.dim() {
            return Err(Error::DimensionMismatch(a.dim(), ctx.dim()));
        }
        let tol = self.tolerances();
        let mut coeffs = Vec::with_capacity(ctx.num_atoms());
        let mut recon = crate::operators::CMat::zeros(ctx.dim(), ctx.dim());
        for atom in ctx.atoms() {
            let w = (a.matrix() * atom.matrix()).trace().re / atom.rank() as f64;
            recon += atom.matrix().map(|z| z * w);
            coeffs.push(w);
        }
        if !crate::operators::mats_close(&recon, a.matrix(), 100.0 * tol.eps_num) {
            return Err(Error::NotInContext(format!(
                "observable is not a real combination of the atoms of `{}`",
                lambda.context()
            )));
        }
        Ok(coeffs[lambda.atom_index()])
    }
}

/// For each atom of the context: is it below `p`? Errors when some atom is
/// neither below `p` nor orthogonal to it (then `p` is not a block of the
/// context).
pub(crate) fn block_membership(
    ctx: &Context,
    p: &Projection,
    tol: &Tolerances,
) -> Result<Vec<bool>> {
    let mut member = Vec::with_capacity(ctx.num_atoms());
    for atom in ctx.atoms() {
        if projection_leq(atom, p, tol)? {
            member.push(true);
        } else if projections_orthogonal(atom, p, tol)? {
            member.push(false);
        } else {
            return Err(Error::NotInContext(format!(
                "projection is not a block sum of the atoms of `{}`",
                ctx.id()
            )));
        }
    }
    Ok(member)
}
