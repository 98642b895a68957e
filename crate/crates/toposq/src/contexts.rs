//! Contexts (finite abelian algebras given by their atoms), their subalgebra
//! lattice, and the finite context poset ordered by algebra inclusion.
//!
//! A context is stored as its set of pairwise-orthogonal atoms summing to the
//! identity; the trivial algebra spanned by 1̂ alone is excluded throughout.
//! `V' ≤ V` means the algebra of `V'` is contained in the algebra of `V`,
//! i.e. every atom of `V` lies below exactly one atom of `V'`.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operators::{
    joint_atoms, max_abs, mats_close, projection_leq, CMat, Projection, Tolerances,
};

/// A unital abelian algebra, represented by its atoms in canonical order
/// (descending rank, then descending lexicographic order of the entries
/// rounded at 1e-6).
#[derive(Debug, Clone)]
pub struct Context {
    id: String,
    atoms: Vec<Projection>,
    dim: usize,
}

fn atom_key(p: &Projection) -> (std::cmp::Reverse<usize>, std::cmp::Reverse<Vec<(i64, i64)>>) {
    let quantized: Vec<(i64, i64)> = p
        .matrix()
        .row_iter()
        .flat_map(|row| {
            row.iter()
                .map(|z| ((z.re * 1e6).round() as i64, (z.im * 1e6).round() as i64))
                .collect::<Vec<_>>()
        })
        .collect();
    (std::cmp::Reverse(p.rank()), std::cmp::Reverse(quantized))
}

impl Context {
    /// Builds the context generated by commuting projections. The atoms are
    /// the joint eigenspace refinement; a lone identity atom is rejected.
    pub fn generate(id: impl Into<String>, generators: &[Projection], tol: &Tolerances) -> Result<Self> {
        let atoms = joint_atoms(generators, tol)?;
        Self::from_atoms(id, atoms, tol)
    }

    /// Builds a context from an explicit atom list, validating orthogonality
    /// and completeness.
    pub fn from_atoms(
        id: impl Into<String>,
        mut atoms: Vec<Projection>,
        tol: &Tolerances,
    ) -> Result<Self> {
        if atoms.len() < 2 {
            return Err(Error::TrivialContext);
        }
        let dim = atoms[0].dim();
        let mut sum = CMat::zeros(dim, dim);
        for (i, a) in atoms.iter().enumerate() {
            if a.dim() != dim {
                return Err(Error::DimensionMismatch(dim, a.dim()));
            }
            if a.is_zero(tol.eps_num) {
                return Err(Error::NotProjection(0.0));
            }
            sum += a.matrix();
            for b in atoms.iter().skip(i + 1) {
                if max_abs(&(a.matrix() * b.matrix())) > 10.0 * tol.eps_num {
                    return Err(Error::validation(
                        "atoms",
                        format!("atoms {i} and a later one are not orthogonal"),
                    ));
                }
            }
        }
        if !mats_close(&sum, &CMat::identity(dim, dim), 10.0 * tol.eps_num) {
            return Err(Error::validation("atoms", "atoms do not sum to the identity"));
        }
        atoms.sort_by_key(atom_key);
        Ok(Context {
            id: id.into(),
            atoms,
            dim,
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_atoms(&self) -> usize {
        self.atoms.len()
    }

    pub fn atoms(&self) -> &[Projection] {
        &self.atoms
    }

    pub fn atom(&self, i: usize) -> &Projection {
        &self.atoms[i]
    }

    /// The block projection Σ_{i ∈ indices} atom_i (zero for no indices).
    pub fn block(&self, indices: impl IntoIterator<Item = usize>) -> Projection {
        let mut m = CMat::zeros(self.dim, self.dim);
        for i in indices {
            m += self.atoms[i].matrix();
        }
        Projection::from_matrix_unchecked(m)
    }

    /// All 2^n block projections of the context, as index sets. Guarded so a
    /// 16-atom context cannot blow up a brute-force caller.
    pub fn all_blocks(&self) -> Result<Vec<BTreeSet<usize>>> {
        let n = self.atoms.len();
        if n > MAX_ENUM_ATOMS {
            return Err(Error::CapacityExceeded {
                what: "atoms per context",
                got: n,
                limit: MAX_ENUM_ATOMS,
            });
        }
        Ok((0..(1usize << n))
            .map(|mask| (0..n).filter(|i| mask >> i & 1 == 1).collect())
            .collect())
    }

    /// Atom-set equality within `eps`, by greedy matching.
    pub fn same_algebra(&self, other: &Context, eps: f64) -> bool {
        if self.dim != other.dim || self.atoms.len() != other.atoms.len() {
            return false;
        }
        let mut used = vec![false; other.atoms.len()];
        'outer: for a in &self.atoms {
            for (j, b) in other.atoms.iter().enumerate() {
                if !used[j] && a.approx_eq(b, eps) {
                    used[j] = true;
                    continue 'outer;
                }
            }
            return false;
        }
        true
    }

    /// One context per partition of the atom set into at least two blocks;
    /// the discrete partition reproduces the context itself. Ids of proper
    /// coarsenings are derived from the partition, e.g. `V3/p0-1.2`.
    pub fn enumerate_subalgebras(&self) -> Vec<Context> {
        let n = self.atoms.len();
        let mut out = Vec::new();
        for rgs in restricted_growth_strings(n) {
            let nblocks = rgs.iter().max().copied().unwrap_or(0) + 1;
            if nblocks < 2 {
                continue;
            }
            if nblocks == n {
                out.push(self.clone());
                continue;
            }
            let mut blocks: Vec<Vec<usize>> = vec![Vec::new(); nblocks];
            for (i, &b) in rgs.iter().enumerate() {
                blocks[b].push(i);
            }
            let desc: Vec<String> = blocks
                .iter()
                .map(|blk| {
                    blk.iter()
                        .map(|i| i.to_string())
                        .collect::<Vec<_>>()
                        .join(".")
                })
                .collect();
            let id = format!("{}/p{}", self.id, desc.join("-"));
            let atoms: Vec<Projection> = blocks
                .iter()
                .map(|blk| self.block(blk.iter().copied()))
                .collect();
            let mut ctx = Context {
                id,
                atoms,
                dim: self.dim,
            };
            ctx.atoms.sort_by_key(atom_key);
            out.push(ctx);
        }
        out
    }
}

/// Enumeration guard for per-context powerset walks.
pub const MAX_ENUM_ATOMS: usize = 6;

/// All set partitions of {0, .., n-1} as restricted growth strings, in
/// lexicographic string order.
fn restricted_growth_strings(n: usize) -> Vec<Vec<usize>> {
    fn rec(rgs: &mut Vec<usize>, maxv: usize, n: usize, out: &mut Vec<Vec<usize>>) {
        if rgs.len() == n {
            out.push(rgs.clone());
            return;
        }
        for v in 0..=maxv + 1 {
            rgs.push(v);
            rec(rgs, maxv.max(v), n, out);
            rgs.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    let mut rgs = vec![0usize];
    rec(&mut rgs, 0, n, &mut out);
    out
}

/// Poset closure policy used by [`ContextPoset::build`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClosurePolicy {
    /// Keep only the given contexts.
    None,
    /// Add every subalgebra of every given context, deduplicated.
    Subalgebras,
}

/// A finite context poset with its inclusion order and refinement structure.
///
/// Contexts are kept sorted by id; `atom_maps[(lower, upper)]` sends each atom
/// index of the finer context `upper` to the index of the unique atom of the
/// coarser context `lower` dominating it.
#[derive(Debug, Clone)]
pub struct ContextPoset {
    contexts: Vec<Context>,
    by_id: BTreeMap<String, usize>,
    leq: Vec<Vec<bool>>,
    atom_maps: BTreeMap<(usize, usize), Vec<usize>>,
    tol: Tolerances,
}

/// The refinement map of `lower ≤ upper`, if the inclusion holds.
fn inclusion_map(lower: &Context, upper: &Context, tol: &Tolerances) -> Option<Vec<usize>> {
    let mut map = Vec::with_capacity(upper.num_atoms());
    for a in upper.atoms() {
        let mut found = None;
        for (j, b) in lower.atoms().iter().enumerate() {
            if projection_leq(a, b, tol).ok()? {
                if found.is_some() {
                    return None;
                }
                found = Some(j);
            }
        }
        map.push(found?);
    }
    Some(map)
}

impl ContextPoset {
    /// Assembles the poset from generating contexts, optionally closing under
    /// subalgebras. Contexts with matching atom sets are identified; the
    /// survivor is the earliest candidate (generators first, in input order,
    /// then enumerated subalgebras).
    pub fn build(
        generating: &[Context],
        closure: ClosurePolicy,
        tol: &Tolerances,
    ) -> Result<Self> {
        if generating.is_empty() {
            return Err(Error::DimensionTooSmall(0));
        }
        let dim = generating[0].dim();
        let mut seen_ids = BTreeSet::new();
        for c in generating {
            if c.dim() != dim {
                return Err(Error::DimensionMismatch(dim, c.dim()));
            }
            if !seen_ids.insert(c.id().to_string()) {
                return Err(Error::DuplicateId(c.id().to_string()));
            }
        }

        let mut candidates: Vec<Context> = generating.to_vec();
        if closure == ClosurePolicy::Subalgebras {
            for c in generating {
                candidates.extend(c.enumerate_subalgebras());
            }
        }

        let mut kept: Vec<Context> = Vec::new();
        for cand in candidates {
            if kept.iter().any(|k| k.same_algebra(&cand, tol.eps_num)) {
                continue;
            }
            if kept.iter().any(|k| k.id() == cand.id()) {
                return Err(Error::DuplicateId(cand.id().to_string()));
            }
            kept.push(cand);
        }

        Self::from_contexts(kept, tol)
    }

    /// Builds the order and refinement maps over an explicit context list
    /// (already deduplicated, e.g. loaded from a model document).
    pub fn from_contexts(mut contexts: Vec<Context>, tol: &Tolerances) -> Result<Self> {
        contexts.sort_by(|a, b| a.id().cmp(b.id()));
        let n = contexts.len();
        let mut by_id = BTreeMap::new();
        for (i, c) in contexts.iter().enumerate() {
            if by_id.insert(c.id().to_string(), i).is_some() {
                return Err(Error::DuplicateId(c.id().to_string()));
            }
        }

        let mut leq = vec![vec![false; n]; n];
        let mut atom_maps = BTreeMap::new();
        for lower in 0..n {
            for upper in 0..n {
                if lower == upper {
                    leq[lower][upper] = true;
                    atom_maps.insert(
                        (lower, upper),
                        (0..contexts[lower].num_atoms()).collect(),
                    );
                    continue;
                }
                // a proper subalgebra has strictly fewer atoms
                if contexts[lower].num_atoms() >= contexts[upper].num_atoms() {
                    continue;
                }
                if let Some(map) = inclusion_map(&contexts[lower], &contexts[upper], tol) {
                    leq[lower][upper] = true;
                    atom_maps.insert((lower, upper), map);
                }
            }
        }

        Ok(ContextPoset {
            contexts,
            by_id,
            leq,
            atom_maps,
            tol: *tol,
        })
    }

    pub fn len(&self) -> usize {
        self.contexts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.contexts.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.contexts[0].dim()
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    /// Contexts in canonical (id-sorted) order.
    pub fn contexts(&self) -> &[Context] {
        &self.contexts
    }

    pub fn index_of(&self, id: &str) -> Result<usize> {
        self.by_id
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownContext(id.to_string()))
    }

    pub fn context(&self, id: &str) -> Result<&Context> {
        Ok(&self.contexts[self.index_of(id)?])
    }

    pub fn context_at(&self, idx: usize) -> &Context {
        &self.contexts[idx]
    }

    /// `lower ≤ upper` in the inclusion order.
    pub fn is_below_idx(&self, lower: usize, upper: usize) -> bool {
        self.leq[lower][upper]
    }

    pub fn is_below(&self, lower: &str, upper: &str) -> Result<bool> {
        Ok(self.is_below_idx(self.index_of(lower)?, self.index_of(upper)?))
    }

    /// Indices of all contexts below (and including) `upper`.
    pub fn downset_idx(&self, upper: usize) -> Vec<usize> {
        (0..self.len()).filter(|&l| self.leq[l][upper]).collect()
    }

    /// Atom map of `lower ≤ upper`: position k holds the index of the
    /// `lower`-atom dominating atom k of `upper`.
    pub fn atom_map_idx(&self, lower: usize, upper: usize) -> Result<&[usize]> {
        self.atom_maps
            .get(&(lower, upper))
            .map(|v| v.as_slice())
            .ok_or_else(|| {
                Error::NotBelow(
                    self.contexts[lower].id().to_string(),
                    self.contexts[upper].id().to_string(),
                )
            })
    }

    /// Indices of maximal contexts (below no other context).
    pub fn maximal_idx(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| (0..self.len()).all(|j| i == j || !self.leq[i][j]))
            .collect()
    }

    /// Context indices ordered finer-to-coarser (descending atom count, then
    /// id); every context precedes everything strictly below it.
    pub fn topo_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by(|&a, &b| {
            self.contexts[b]
                .num_atoms()
                .cmp(&self.contexts[a].num_atoms())
                .then_with(|| self.contexts[a].id().cmp(self.contexts[b].id()))
        });
        order
    }

    /// Number of strict inclusion pairs (the poset's arrows).
    pub fn strict_pairs(&self) -> usize {
        let n = self.len();
        (0..n)
            .flat_map(|l| (0..n).map(move |u| (l, u)))
            .filter(|&(l, u)| l != u && self.leq[l][u])
            .count()
    }

    /// The maximal sieve ↓V on a context.
    pub fn principal_sieve(&self, id: &str) -> Result<Sieve> {
        let upper = self.index_of(id)?;
        let members = self
            .downset_idx(upper)
            .into_iter()
            .map(|i| self.contexts[i].id().to_string())
            .collect();
        Ok(Sieve {
            base: id.to_string(),
            members,
        })
    }
}

/// A downward-closed set of contexts below a base context.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sieve {
    base: String,
    members: BTreeSet<String>,
}

impl Sieve {
    pub fn empty(base: impl Into<String>) -> Self {
        Sieve {
            base: base.into(),
            members: BTreeSet::new(),
        }
    }

    pub fn new(base: impl Into<String>, members: BTreeSet<String>, poset: &ContextPoset) -> Result<Self> {
        let s = Sieve {
            base: base.into(),
            members,
        };
        s.validate(poset)?;
        Ok(s)
    }

    pub fn base(&self) -> &str {
        &self.base
    }

    pub fn members(&self) -> &BTreeSet<String> {
        &self.members
    }

    pub fn contains(&self, id: &str) -> bool {
        self.members.contains(id)
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Whether this is the maximal sieve ↓base.
    pub fn is_maximal(&self, poset: &ContextPoset) -> Result<bool> {
        Ok(poset.principal_sieve(&self.base)?.members == self.members)
    }

    /// Checks membership below base and downward closure.
    pub fn validate(&self, poset: &ContextPoset) -> Result<()> {
        let base = poset.index_of(&self.base)?;
        for m in &self.members {
            let i = poset.index_of(m)?;
            if !poset.is_below_idx(i, base) {
                return Err(Error::NotBelow(m.clone(), self.base.clone()));
            }
            for l in poset.downset_idx(i) {
                let lid = poset.context_at(l).id();
                if !self.members.contains(lid) {
                    return Err(Error::validation(
                        "sieve",
                        format!("not downward closed: misses `{lid}` below `{m}`"),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Pushes the sieve down along `lower ≤ base`: members ∩ ↓lower.
    pub fn intersect_down(&self, poset: &ContextPoset, lower: &str) -> Result<Sieve> {
        let base = poset.index_of(&self.base)?;
        let l = poset.index_of(lower)?;
        if !poset.is_below_idx(l, base) {
            return Err(Error::NotBelow(lower.to_string(), self.base.clone()));
        }
        let down: BTreeSet<String> = poset
            .downset_idx(l)
            .into_iter()
            .map(|i| poset.context_at(i).id().to_string())
            .collect();
        Ok(Sieve {
            base: lower.to_string(),
            members: self.members.intersection(&down).cloned().collect(),
        })
    }

    pub(crate) fn union_same_base(&self, other: &Sieve) -> Sieve {
        Sieve {
            base: self.base.clone(),
            members: self.members.union(&other.members).cloned().collect(),
        }
    }

    pub(crate) fn intersect_same_base(&self, other: &Sieve) -> Sieve {
        Sieve {
            base: self.base.clone(),
            members: self.members.intersection(&other.members).cloned().collect(),
        }
    }

    pub fn subset_of(&self, other: &Sieve) -> bool {
        self.members.is_subset(&other.members)
    }
}
