//! Clopen subobjects of the spectral presheaf and their Heyting algebra.
//!
//! On finite discrete spectra every subset is clopen, so a clopen subobject
//! is a stage-wise family of character index sets closed under restriction.
//! Meet and join act stage-wise; implication and negation quantify over all
//! lower stages, which is exactly where the logic stops being Boolean.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;

use crate::contexts::Context;
use crate::error::{Error, Result};
use crate::operators::{Projection, Tolerances};
use crate::spectrum::{block_membership, SpectralPresheaf};

/// The lattice isomorphism P(V) → Cl(Σ_V): the set of characters where the
/// block projection evaluates to 1.
pub fn alpha(ctx: &Context, p: &Projection, tol: &Tolerances) -> Result<BTreeSet<usize>> {
    Ok(block_membership(ctx, p, tol)?
        .into_iter()
        .enumerate()
        .filter_map(|(i, m)| m.then_some(i))
        .collect())
}

/// The inverse isomorphism: the block projection of a character set.
pub fn alpha_inverse(ctx: &Context, s: &BTreeSet<usize>) -> Projection {
    ctx.block(s.iter().copied())
}

/// A subobject of the spectral presheaf with one component per context,
/// closed under restriction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClopenSubobject {
    components: BTreeMap<String, BTreeSet<usize>>,
}

impl ClopenSubobject {
    pub fn empty(ps: &SpectralPresheaf) -> Self {
        ClopenSubobject {
            components: ps
                .poset()
                .contexts()
                .iter()
                .map(|c| (c.id().to_string(), BTreeSet::new()))
                .collect(),
        }
    }

    pub fn full(ps: &SpectralPresheaf) -> Self {
        ClopenSubobject {
            components: ps
                .poset()
                .contexts()
                .iter()
                .map(|c| (c.id().to_string(), (0..c.num_atoms()).collect()))
                .collect(),
        }
    }

    /// Validates coverage of every context and restriction closure:
    /// λ ∈ S_V implies λ|_{V'} ∈ S_{V'} for every V' ≤ V.
    pub fn from_components(
        ps: &SpectralPresheaf,
        components: BTreeMap<String, BTreeSet<usize>>,
    ) -> Result<Self> {
        let poset = ps.poset();
        if components.len() != poset.len() {
            return Err(Error::PresheafMismatch);
        }
        for ctx in poset.contexts() {
            let comp = components
                .get(ctx.id())
                .ok_or(Error::PresheafMismatch)?;
            if comp.iter().any(|&i| i >= ctx.num_atoms()) {
                return Err(Error::validation(
                    ctx.id(),
                    "character index out of range",
                ));
            }
        }
        let s = ClopenSubobject { components };
        s.check_restriction_closed(ps)?;
        Ok(s)
    }

    pub(crate) fn from_components_unchecked(
        components: BTreeMap<String, BTreeSet<usize>>,
    ) -> Self {
        ClopenSubobject { components }
    }

    pub fn check_restriction_closed(&self, ps: &SpectralPresheaf) -> Result<()> {
        let poset = ps.poset();
        for upper in 0..poset.len() {
            let uid = poset.context_at(upper).id();
            for lower in poset.downset_idx(upper) {
                if lower == upper {
                    continue;
                }
                let lid = poset.context_at(lower).id();
                let target = &self.components[lid];
                for &atom in &self.components[uid] {
                    let image = ps.restrict_index(lower, upper, atom)?;
                    if !target.contains(&image) {
                        return Err(Error::validation(
                            uid,
                            format!("restriction image {image} missing at `{lid}`"),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn components(&self) -> &BTreeMap<String, BTreeSet<usize>> {
        &self.components
    }

    pub fn component(&self, id: &str) -> Result<&BTreeSet<usize>> {
        self.components
            .get(id)
            .ok_or_else(|| Error::UnknownContext(id.to_string()))
    }

    pub fn is_empty_subobject(&self) -> bool {
        self.components.values().all(|s| s.is_empty())
    }

    pub fn is_full(&self, ps: &SpectralPresheaf) -> bool {
        self == &ClopenSubobject::full(ps)
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.components.len() == other.components.len()
            && self
                .components
                .keys()
                .zip(other.components.keys())
                .all(|(a, b)| a == b)
        {
            Ok(())
        } else {
            Err(Error::PresheafMismatch)
        }
    }

    /// Stage-wise intersection.
    pub fn meet(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(ClopenSubobject {
            components: self
                .components
                .iter()
                .map(|(id, s)| {
                    (
                        id.clone(),
                        s.intersection(&other.components[id]).copied().collect(),
                    )
                })
                .collect(),
        })
    }

    /// Stage-wise union.
    pub fn join(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(ClopenSubobject {
            components: self
                .components
                .iter()
                .map(|(id, s)| {
                    (
                        id.clone(),
                        s.union(&other.components[id]).copied().collect(),
                    )
                })
                .collect(),
        })
    }

    /// Stage-wise inclusion.
    pub fn leq(&self, other: &Self) -> Result<bool> {
        self.check_same_shape(other)?;
        Ok(self
            .components
            .iter()
            .all(|(id, s)| s.is_subset(&other.components[id])))
    }

    /// Heyting implication: λ belongs to (S₁ ⇒ S₂)_V iff for every V' ≤ V,
    /// λ|_{V'} ∈ S₁ implies λ|_{V'} ∈ S₂. Not local at V.
    pub fn implies(&self, other: &Self, ps: &SpectralPresheaf) -> Result<Self> {
        self.check_same_shape(other)?;
        let poset = ps.poset();
        let mut components = BTreeMap::new();
        for upper in 0..poset.len() {
            let ctx = poset.context_at(upper);
            let mut comp = BTreeSet::new();
            'chars: for atom in 0..ctx.num_atoms() {
                for lower in poset.downset_idx(upper) {
                    let lid = poset.context_at(lower).id();
                    let image = ps.restrict_index(lower, upper, atom)?;
                    if self.components[lid].contains(&image)
                        && !other.components[lid].contains(&image)
                    {
                        continue 'chars;
                    }
                }
                comp.insert(atom);
            }
            components.insert(ctx.id().to_string(), comp);
        }
        Ok(ClopenSubobject { components })
    }

    /// Heyting negation S ⇒ 0̲: λ qualifies at V iff no restriction of λ ever
    /// lands in S.
    pub fn negate(&self, ps: &SpectralPresheaf) -> Result<Self> {
        self.implies(&ClopenSubobject::empty(ps), ps)
    }
}

/// Enumeration guard: full enumeration of Sub_cl(Σ) is offered only while the
/// presheaf carries at most this many characters in total.
pub const MAX_ENUM_CHARACTERS: usize = 12;

/// All clopen subobjects of a small presheaf, in a deterministic order.
///
/// Walks contexts finer-to-coarser, choosing each component among the
/// supersets of the restriction images forced by the stages already fixed.
pub fn enumerate_clopen(ps: &SpectralPresheaf) -> Result<Vec<ClopenSubobject>> {
    let total = ps.total_characters();
    if total > MAX_ENUM_CHARACTERS {
        return Err(Error::CapacityExceeded {
            what: "total characters",
            got: total,
            limit: MAX_ENUM_CHARACTERS,
        });
    }
    let poset = ps.poset();
    let order = poset.topo_order();

    fn rec(
        ps: &SpectralPresheaf,
        order: &[usize],
        pos: usize,
        chosen: &mut BTreeMap<usize, BTreeSet<usize>>,
        out: &mut Vec<ClopenSubobject>,
    ) {
        let poset = ps.poset();
        if pos == order.len() {
            let components = chosen
                .iter()
                .map(|(&idx, s)| (poset.context_at(idx).id().to_string(), s.clone()))
                .collect();
            out.push(ClopenSubobject { components });
            return;
        }
        let here = order[pos];
        let n = poset.context_at(here).num_atoms();
        let mut forced: BTreeSet<usize> = BTreeSet::new();
        for (&upper, comp) in chosen.iter() {
            if upper != here && poset.is_below_idx(here, upper) {
                for &atom in comp {
                    forced.insert(ps.restrict_index(here, upper, atom).unwrap());
                }
            }
        }
        let free: Vec<usize> = (0..n).filter(|i| !forced.contains(i)).collect();
        for mask in 0..(1usize << free.len()) {
            let mut comp = forced.clone();
            for (bit, &i) in free.iter().enumerate() {
                if mask >> bit & 1 == 1 {
                    comp.insert(i);
                }
            }
            chosen.insert(here, comp);
            rec(ps, order, pos + 1, chosen, out);
        }
        chosen.remove(&here);
    }

    let mut out = Vec::new();
    rec(ps, &order, 0, &mut BTreeMap::new(), &mut out);
    Ok(out)
}

/// Seeded random clopen subobject: stage-wise random subsets drawn
/// finer-to-coarser, closed downward by adding every restriction image.
pub fn random_clopen(ps: &SpectralPresheaf, rng: &mut impl Rng) -> ClopenSubobject {
    let poset = ps.poset();
    let mut chosen: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    for here in poset.topo_order() {
        let n = poset.context_at(here).num_atoms();
        let mut comp: BTreeSet<usize> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
        for (&upper, uc) in chosen.iter() {
            if upper != here && poset.is_below_idx(here, upper) {
                for &atom in uc {
                    comp.insert(ps.restrict_index(here, upper, atom).unwrap());
                }
            }
        }
        chosen.insert(here, comp);
    }
    ClopenSubobject {
        components: chosen
            .into_iter()
            .map(|(idx, s)| (poset.context_at(idx).id().to_string(), s))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contexts::{ClosurePolicy, Context, ContextPoset};
    use crate::operators::CMat;
    use nalgebra::DMatrix;
    use num_complex::Complex64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn diag(entries: &[f64]) -> CMat {
        let n = entries.len();
        DMatrix::from_fn(n, n, |i, j| {
            Complex64::new(if i == j { entries[i] } else { 0.0 }, 0.0)
        })
    }

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn presheaf_b() -> SpectralPresheaf {
        let v3 = Context::generate(
            "V3",
            &[
                Projection::new(diag(&[1., 0., 0.])).unwrap(),
                Projection::new(diag(&[0., 1., 0.])).unwrap(),
            ],
            &tol(),
        )
        .unwrap();
        SpectralPresheaf::new(
            ContextPoset::build(&[v3], ClosurePolicy::Subalgebras, &tol()).unwrap(),
        )
    }

    #[test]
    fn alpha_examples() {
        let ps = presheaf_b();
        let v3 = ps.poset().context("V3").unwrap();
        let e23 = Projection::new(diag(&[0., 1., 1.])).unwrap();
        assert_eq!(
            alpha(v3, &e23, &tol()).unwrap(),
            [1usize, 2].into_iter().collect::<BTreeSet<_>>()
        );
        assert!(alpha(v3, &Projection::zero(3), &tol()).unwrap().is_empty());
        assert_eq!(alpha(v3, &Projection::identity(3), &tol()).unwrap().len(), 3);
    }

    #[test]
    fn alpha_round_trips() {
        let ps = presheaf_b();
        let v3 = ps.poset().context("V3").unwrap();
        for s in v3.all_blocks().unwrap() {
            let p = alpha_inverse(v3, &s);
            assert_eq!(alpha(v3, &p, &tol()).unwrap(), s);
        }
    }

    #[test]
    fn lattice_units() {
        let ps = presheaf_b();
        let zero = ClopenSubobject::empty(&ps);
        let one = ClopenSubobject::full(&ps);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let s = random_clopen(&ps, &mut rng);
            s.check_restriction_closed(&ps).unwrap();
            assert_eq!(s.join(&zero).unwrap(), s);
            assert_eq!(s.meet(&one).unwrap(), s);
            assert!(zero.leq(&s).unwrap());
            assert!(s.leq(&one).unwrap());
        }
    }

    #[test]
    fn implies_units() {
        let ps = presheaf_b();
        let zero = ClopenSubobject::empty(&ps);
        let one = ClopenSubobject::full(&ps);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let s = random_clopen(&ps, &mut rng);
            assert_eq!(zero.implies(&s, &ps).unwrap(), one, "ex falso");
            assert_eq!(s.implies(&s, &ps).unwrap(), one);
            // double negation: S ≤ ¬¬S
            let nn = s.negate(&ps).unwrap().negate(&ps).unwrap();
            assert!(s.leq(&nn).unwrap());
        }
    }

    #[test]
    fn excluded_middle_fails_strictly() {
        // component {λ1} at V3, full components at the three coarsenings
        let ps = presheaf_b();
        let mut components: BTreeMap<String, BTreeSet<usize>> = BTreeMap::new();
        for ctx in ps.poset().contexts() {
            if ctx.id() == "V3" {
                components.insert(ctx.id().to_string(), [0usize].into_iter().collect());
            } else {
                components.insert(ctx.id().to_string(), (0..ctx.num_atoms()).collect());
            }
        }
        let s = ClopenSubobject::from_components(&ps, components).unwrap();
        let neg = s.negate(&ps).unwrap();
        assert!(neg.is_empty_subobject(), "negation collapses to 0̲");
        let lem = s.join(&neg).unwrap();
        assert!(!lem.is_full(&ps));
        assert_eq!(lem.component("V3").unwrap().len(), 1);
    }

    #[test]
    fn enumeration_has_the_expected_count() {
        // stage-wise count over Poset B: 64 + 3·8 + 6 + 1 = 95
        let ps = presheaf_b();
        let all = enumerate_clopen(&ps).unwrap();
        assert_eq!(all.len(), 95);
        for s in &all {
            s.check_restriction_closed(&ps).unwrap();
        }
    }

    #[test]
    fn adjunction_on_poset_b() {
        let ps = presheaf_b();
        let all = enumerate_clopen(&ps).unwrap();
        // spot-check the adjunction on a deterministic slice; the acceptance
        // suite covers every triple
        for (i, z) in all.iter().enumerate().step_by(9) {
            for (j, s1) in all.iter().enumerate().step_by(7) {
                for (k, s2) in all.iter().enumerate().step_by(5) {
                    let left = z.meet(s1).unwrap().leq(s2).unwrap();
                    let right = z.leq(&s1.implies(s2, &ps).unwrap()).unwrap();
                    assert_eq!(left, right, "triple ({i},{j},{k})");
                }
            }
        }
    }

    #[test]
    fn antichain_negation_is_stagewise_complement() {
        let vz = crate::contexts::Context::generate(
            "Vz",
            &[Projection::new(diag(&[1., 0.])).unwrap()],
            &tol(),
        )
        .unwrap();
        let sx = crate::operators::Observable::new(DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(0., 0.),
                Complex64::new(1., 0.),
                Complex64::new(1., 0.),
                Complex64::new(0., 0.),
            ],
        ))
        .unwrap();
        let p_plus = crate::operators::spectral_projection(
            &sx,
            &crate::operators::IntervalUnion::point(1.0),
            &tol(),
        );
        let vx = crate::contexts::Context::generate("Vx", &[p_plus], &tol()).unwrap();
        let ps = SpectralPresheaf::new(
            ContextPoset::build(&[vz, vx], ClosurePolicy::Subalgebras, &tol()).unwrap(),
        );
        for s in enumerate_clopen(&ps).unwrap() {
            let neg = s.negate(&ps).unwrap();
            for ctx in ps.poset().contexts() {
                let comp = s.component(ctx.id()).unwrap();
                let expect: BTreeSet<usize> =
                    (0..ctx.num_atoms()).filter(|i| !comp.contains(i)).collect();
                assert_eq!(neg.component(ctx.id()).unwrap(), &expect);
            }
            assert!(s.join(&neg).unwrap().is_full(&ps));
        }
    }
}
