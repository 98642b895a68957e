//! Mixed states as measures on the spectral presheaf.
//!
//! A density operator ρ induces the measure S̲ ↦ (tr(ρ·P̂_{S_V}))_V with values
//! in the antitone [0,1]-valued functions on the poset. The measure satisfies
//! normalization μ(Σ) = 1 and the modular law μ(S̲₁∨S̲₂) + μ(S̲₁∧S̲₂) =
//! μ(S̲₁) + μ(S̲₂) stage-wise. The same data can be packaged as a family of
//! generalized truth objects indexed by a threshold r ∈ (0,1], from which the
//! measure is reconstructed up to the grid resolution; and at desk scale the
//! atom probabilities over an informationally complete context family pin
//! down the state itself.

use std::collections::{BTreeMap, BTreeSet};

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::contexts::{Context, ContextPoset};
use crate::error::{Error, Result};
use crate::operators::{
    spectral_projection, CMat, DensityState, IntervalUnion, Observable,
    Tolerances,
};
use crate::spectrum::SpectralPresheaf;
use crate::subobjects::{alpha_inverse, random_clopen, ClopenSubobject};

/// A context-indexed function into [0,1] that can only grow toward coarser
/// contexts.
#[derive(Debug, Clone, PartialEq)]
pub struct AntitoneValuation {
    values: BTreeMap<String, f64>,
}

impl AntitoneValuation {
    pub fn values(&self) -> &BTreeMap<String, f64> {
        &self.values
    }

    pub fn value(&self, id: &str) -> Result<f64> {
        self.values
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownContext(id.to_string()))
    }

    pub fn constant(poset: &ContextPoset, r: f64) -> Self {
        AntitoneValuation {
            values: poset
                .contexts()
                .iter()
                .map(|c| (c.id().to_string(), r))
                .collect(),
        }
    }

    /// Largest violation of antitonicity along the poset arrows (0 when the
    /// valuation is antitone).
    pub fn max_antitone_violation(&self, poset: &ContextPoset) -> f64 {
        let mut worst: f64 = 0.0;
        for upper in 0..poset.len() {
            let vu = self.values[poset.context_at(upper).id()];
            for lower in poset.downset_idx(upper) {
                let vl = self.values[poset.context_at(lower).id()];
                worst = worst.max(vu - vl);
            }
        }
        worst
    }

    pub fn is_antitone(&self, poset: &ContextPoset, eps: f64) -> bool {
        self.max_antitone_violation(poset) <= eps
    }

    pub fn max_abs_diff(&self, other: &AntitoneValuation) -> f64 {
        self.values
            .iter()
            .map(|(id, v)| (v - other.values.get(id).copied().unwrap_or(f64::NAN)).abs())
            .fold(0.0, f64::max)
    }
}

/// The measure of a clopen subobject in the state ρ.
pub fn measure(
    rho: &DensityState,
    s: &ClopenSubobject,
    ps: &SpectralPresheaf,
) -> Result<AntitoneValuation> {
    if rho.dim() != ps.dim() {
        return Err(Error::DimensionMismatch(rho.dim(), ps.dim()));
    }
    let mut values = BTreeMap::new();
    for ctx in ps.poset().contexts() {
        let p = alpha_inverse(ctx, s.component(ctx.id())?);
        values.insert(ctx.id().to_string(), rho.expectation(&p)?);
    }
    Ok(AntitoneValuation { values })
}

/// Report of a seeded run of the measure axioms for one state.
#[derive(Debug, Clone)]
pub struct MeasureAxiomReport {
    pub samples: usize,
    pub max_normalization_violation: f64,
    pub max_additivity_violation: f64,
    pub max_antitone_violation: f64,
    /// Stage and sample index of the worst additivity offender, if any
    /// violation exceeded the tolerance.
    pub witness: Option<String>,
}

impl MeasureAxiomReport {
    pub fn passed(&self, eps: f64) -> bool {
        self.max_normalization_violation <= eps
            && self.max_additivity_violation <= eps
            && self.max_antitone_violation <= eps
    }
}

/// Draws seeded random clopen-subobject pairs and checks μ(Σ) = 1 and the
/// stage-wise modular law μ(S̲₁∨S̲₂) + μ(S̲₁∧S̲₂) = μ(S̲₁) + μ(S̲₂).
pub fn verify_measure_axioms(
    rho: &DensityState,
    ps: &SpectralPresheaf,
    sample_pairs: usize,
    seed: u64,
) -> Result<MeasureAxiomReport> {
    let eps = ps.tolerances().eps_meas;
    let full = measure(rho, &ClopenSubobject::full(ps), ps)?;
    let max_normalization_violation = full
        .values()
        .values()
        .map(|v| (v - 1.0).abs())
        .fold(0.0, f64::max);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_additivity_violation: f64 = 0.0;
    let mut max_antitone_violation: f64 = 0.0;
    let mut witness = None;
    for k in 0..sample_pairs {
        let s1 = random_clopen(ps, &mut rng);
        let s2 = random_clopen(ps, &mut rng);
        let m1 = measure(rho, &s1, ps)?;
        let m2 = measure(rho, &s2, ps)?;
        let mj = measure(rho, &s1.join(&s2)?, ps)?;
        let mm = measure(rho, &s1.meet(&s2)?, ps)?;
        for (id, v1) in m1.values() {
            let lhs = mj.values()[id] + mm.values()[id];
            let rhs = v1 + m2.values()[id];
            let viol = (lhs - rhs).abs();
            if viol > max_additivity_violation {
                max_additivity_violation = viol;
                if viol > eps {
                    witness = Some(format!("pair {k} stage `{id}`: |{lhs} - {rhs}|"));
                }
            }
        }
        for m in [&m1, &m2, &mj, &mm] {
            max_antitone_violation =
                max_antitone_violation.max(m.max_antitone_violation(ps.poset()));
        }
    }
    Ok(MeasureAxiomReport {
        samples: sample_pairs,
        max_normalization_violation,
        max_additivity_violation,
        max_antitone_violation,
        witness,
    })
}

/// One stage of the generalized truth object at threshold r: the clopen
/// subsets whose block projection has ρ-probability at least r.
pub fn generalized_truth_object_component(
    rho: &DensityState,
    r: f64,
    ctx: &Context,
    tol: &Tolerances,
) -> Result<BTreeSet<BTreeSet<usize>>> {
    if !(r > 0.0 && r <= 1.0) {
        return Err(Error::BadThreshold(r));
    }
    if rho.dim() != ctx.dim() {
        return Err(Error::DimensionMismatch(rho.dim(), ctx.dim()));
    }
    let mut members = BTreeSet::new();
    for s in ctx.all_blocks()? {
        let p = alpha_inverse(ctx, &s);
        if rho.expectation(&p)? >= r - tol.eps_meas {
            members.insert(s);
        }
    }
    Ok(members)
}

/// The default threshold grid {0.05, 0.10, .., 1.00}.
pub fn default_r_grid() -> Vec<f64> {
    (1..=20).map(|k| k as f64 * 0.05).collect()
}

/// The family of generalized truth objects of a state over a threshold grid.
#[derive(Debug, Clone)]
pub struct GeneralizedTruthObjectFamily {
    grid: Vec<f64>,
    /// per context id, per grid index
    components: BTreeMap<String, Vec<BTreeSet<BTreeSet<usize>>>>,
}

impl GeneralizedTruthObjectFamily {
    pub fn build(
        rho: &DensityState,
        ps: &SpectralPresheaf,
        grid: Vec<f64>,
    ) -> Result<Self> {
        if grid.is_empty() || grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::BadThreshold(f64::NAN));
        }
        let tol = ps.tolerances();
        let mut components = BTreeMap::new();
        for ctx in ps.poset().contexts() {
            let per_r: Vec<BTreeSet<BTreeSet<usize>>> = grid
                .iter()
                .map(|&r| generalized_truth_object_component(rho, r, ctx, tol))
                .collect::<Result<_>>()?;
            components.insert(ctx.id().to_string(), per_r);
        }
        Ok(GeneralizedTruthObjectFamily { grid, components })
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn component(&self, r_index: usize, id: &str) -> Result<&BTreeSet<BTreeSet<usize>>> {
        self.components
            .get(id)
            .and_then(|v| v.get(r_index))
            .ok_or_else(|| Error::UnknownContext(id.to_string()))
    }

    /// Reconstructs the measure of S̲ from the family: at each context the
    /// largest grid threshold whose component still contains S̲'s stage
    /// (0 when none does). Off from the true measure by at most the grid step.
    pub fn measure_from_family(&self, s: &ClopenSubobject) -> Result<AntitoneValuation> {
        if s.components().len() != self.components.len()
            || !s.components().keys().all(|id| self.components.contains_key(id))
        {
            return Err(Error::PresheafMismatch);
        }
        let mut values = BTreeMap::new();
        for (id, stage) in s.components() {
            let per_r = &self.components[id];
            let mut best = 0.0;
            for (k, members) in per_r.iter().enumerate() {
                if members.contains(stage) {
                    best = self.grid[k];
                }
            }
            values.insert(id.clone(), best);
        }
        Ok(AntitoneValuation { values })
    }
}

/// The support of the measure of a pure state: stage-wise the α-image of the
/// least block carrying full probability. Rejects mixed input.
pub fn support_of_measure(
    rho: &DensityState,
    ps: &SpectralPresheaf,
) -> Result<ClopenSubobject> {
    let tol = ps.tolerances();
    let rank = rho.rank(10.0 * tol.eps_num);
    if rank > 1 {
        return Err(Error::NotPure(rank));
    }
    let mut components: BTreeMap<String, BTreeSet<usize>> = BTreeMap::new();
    for ctx in ps.poset().contexts() {
        let mut stage = BTreeSet::new();
        for (i, atom) in ctx.atoms().iter().enumerate() {
            if rho.expectation(atom)? > tol.eps_num {
                stage.insert(i);
            }
        }
        components.insert(ctx.id().to_string(), stage);
    }
    ClopenSubobject::from_components(ps, components)
}

/// Result of a least-squares state reconstruction.
#[derive(Debug, Clone)]
pub struct Reconstruction {
    pub state: DensityState,
    /// Max-norm residual of the linear system tr(ρ·atom) = p.
    pub residual: f64,
}

const RECONSTRUCTION_EPS: f64 = 1e-6;

/// Recovers the density matrix from atom probabilities over a context family.
///
/// Solves tr(ρ·a) = p_a over Hermitian unit-trace matrices by least squares.
/// Requires the atoms to span the real vector space of Hermitian matrices
/// (an informationally complete family), otherwise `Underdetermined`.
pub fn reconstruct_state(
    poset: &ContextPoset,
    atom_probabilities: &BTreeMap<(String, usize), f64>,
) -> Result<Reconstruction> {
    let dim = poset.dim();
    let unknowns = dim * dim;
    let eps = poset.tolerances().eps_meas;

    // validate probabilities: range and per-context completeness
    let mut per_context: BTreeMap<&str, f64> = BTreeMap::new();
    for ((id, atom), &p) in atom_probabilities {
        let ctx = poset.context(id)?;
        if *atom >= ctx.num_atoms() {
            return Err(Error::validation(
                format!("{id}[{atom}]"),
                "atom index out of range",
            ));
        }
        if !(-eps..=1.0 + eps).contains(&p) {
            return Err(Error::validation(
                format!("{id}[{atom}]"),
                format!("probability {p} outside [0,1]"),
            ));
        }
        *per_context.entry(ctx.id()).or_insert(0.0) += p;
    }
    if per_context.is_empty() {
        return Err(Error::Underdetermined {
            rank: 0,
            needed: unknowns,
        });
    }
    for (id, sum) in &per_context {
        let ctx = poset.context(id)?;
        let entries = atom_probabilities
            .keys()
            .filter(|(cid, _)| cid == id)
            .count();
        if entries != ctx.num_atoms() {
            return Err(Error::validation(
                (*id).to_string(),
                format!("{entries} of {} atom probabilities given", ctx.num_atoms()),
            ));
        }
        if (sum - 1.0).abs() > 1e-9 + 10.0 * eps {
            return Err(Error::validation(
                (*id).to_string(),
                format!("probabilities sum to {sum}, not 1"),
            ));
        }
    }

    // real parametrization of Hermitian ρ: diagonal entries, then (re, im)
    // per strict upper-triangle entry
    let col_of_diag = |i: usize| i;
    let mut off_index = BTreeMap::new();
    {
        let mut next = dim;
        for i in 0..dim {
            for j in (i + 1)..dim {
                off_index.insert((i, j), next);
                next += 2;
            }
        }
    }

    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut rhs: Vec<f64> = Vec::new();
    let mut add_equation = |a: &CMat, p: f64| {
        let mut row = vec![0.0; unknowns];
        for i in 0..dim {
            row[col_of_diag(i)] = a[(i, i)].re;
            for j in (i + 1)..dim {
                let base = off_index[&(i, j)];
                row[base] = 2.0 * a[(i, j)].re;
                row[base + 1] = 2.0 * a[(i, j)].im;
            }
        }
        rows.push(row);
        rhs.push(p);
    };

    for ((id, atom), &p) in atom_probabilities {
        let ctx = poset.context(id)?;
        add_equation(ctx.atom(*atom).matrix(), p);
    }
    // unit trace
    add_equation(&CMat::identity(dim, dim), 1.0);

    let m = DMatrix::from_fn(rows.len(), unknowns, |r, c| rows[r][c]);
    let b = DVector::from_vec(rhs);

    // normal equations solved through the Gram spectrum: the systems here are
    // tiny and well conditioned, and the symmetric eigensolver is more
    // accurate than the rectangular SVD
    let gram = m.transpose() * &m;
    let proj_rhs = m.transpose() * &b;
    let eig = gram.symmetric_eigen();
    let lambda_max = eig.eigenvalues.iter().cloned().fold(0.0f64, f64::max);
    let keep = lambda_max * 1e-9;
    let rank = eig.eigenvalues.iter().filter(|&&l| l > keep).count();
    if rank < unknowns {
        return Err(Error::Underdetermined {
            rank,
            needed: unknowns,
        });
    }
    let mut x = DVector::zeros(unknowns);
    for k in 0..unknowns {
        let v = eig.eigenvectors.column(k);
        x += v.into_owned() * (v.dot(&proj_rhs) / eig.eigenvalues[k]);
    }
    let residual = (&m * &x - &b).iter().map(|v| v.abs()).fold(0.0, f64::max);
    if residual > RECONSTRUCTION_EPS {
        return Err(Error::InconsistentData(residual));
    }

    let mut rho = CMat::zeros(dim, dim);
    for i in 0..dim {
        rho[(i, i)] = num_complex::Complex64::new(x[col_of_diag(i)], 0.0);
        for j in (i + 1)..dim {
            let base = off_index[&(i, j)];
            rho[(i, j)] = num_complex::Complex64::new(x[base], x[base + 1]);
            rho[(j, i)] = num_complex::Complex64::new(x[base], -x[base + 1]);
        }
    }
    let state = DensityState::new_with(rho, RECONSTRUCTION_EPS)
        .map_err(|_| Error::InconsistentData(residual))?;
    Ok(Reconstruction { state, residual })
}

/// Forward-computes the atom probabilities of a state over a poset, the input
/// `reconstruct_state` expects back.
pub fn atom_probabilities(
    rho: &DensityState,
    poset: &ContextPoset,
) -> Result<BTreeMap<(String, usize), f64>> {
    let mut out = BTreeMap::new();
    for ctx in poset.contexts() {
        for (i, atom) in ctx.atoms().iter().enumerate() {
            out.insert((ctx.id().to_string(), i), rho.expectation(atom)?);
        }
    }
    Ok(out)
}

/// Informationally complete context families for testing reconstruction.
pub mod tomography {
    use super::*;

    fn pauli_contexts(tol: &Tolerances) -> Result<Vec<Context>> {
        let c = num_complex::Complex64::new;
        let z = CMat::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)]);
        let x = CMat::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]);
        let y = CMat::from_row_slice(2, 2, &[c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)]);
        [("Vz", z), ("Vx", x), ("Vy", y)]
            .into_iter()
            .map(|(id, m)| {
                let obs = Observable::new_with(m, tol)?;
                let up = spectral_projection(&obs, &IntervalUnion::point(1.0), tol);
                Context::generate(id, &[up], tol)
            })
            .collect()
    }

    /// The eigenbases of the three Pauli operators: informationally complete
    /// for a qubit.
    pub fn qubit_poset(tol: &Tolerances) -> Result<ContextPoset> {
        ContextPoset::build(&pauli_contexts(tol)?, crate::contexts::ClosurePolicy::None, tol)
    }

    /// The four mutually unbiased qutrit bases (eigenbases of the clock
    /// operator Z, the shift X, and XZ, XZ²): informationally complete for a
    /// qutrit.
    pub fn qutrit_poset(tol: &Tolerances) -> Result<ContextPoset> {
        let c = num_complex::Complex64::new;
        let omega = c(-0.5, 3.0_f64.sqrt() / 2.0);
        let mut z = CMat::zeros(3, 3);
        let mut x = CMat::zeros(3, 3);
        for k in 0..3 {
            z[(k, k)] = omega.powu(k as u32);
            x[((k + 1) % 3, k)] = c(1.0, 0.0);
        }
        let bases = [
            ("B0", z.clone()),
            ("B1", x.clone()),
            ("B2", &x * &z),
            ("B3", &x * &z * &z),
        ];
        let mut contexts = Vec::new();
        for (id, m) in bases {
            // unitary with three distinct eigenvalues: take the atoms of the
            // Hermitian part pair (m + m†, i(m − m†)) which share its eigenbasis
            let h1 = Observable::new_with((&m + m.adjoint()).map(|v| v * 0.5), tol)?;
            let h2 = Observable::new_with(
                ((&m - m.adjoint()) * c(0.0, -0.5)).map(|v| v),
                tol,
            )?;
            let mut gens = Vec::new();
            for h in [h1, h2] {
                for (_, p) in crate::operators::spectral_decompose(&h, tol) {
                    gens.push(p);
                }
            }
            contexts.push(Context::generate(id, &gens, tol)?);
        }
        ContextPoset::build(&contexts, crate::contexts::ClosurePolicy::None, tol)
    }
}
