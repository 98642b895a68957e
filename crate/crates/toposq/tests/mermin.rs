//! Brute-force structural checks on the Peres-Mermin poset: the inclusion
//! order against algebra inclusion, shared subalgebras across rows and
//! columns, refinement-map functoriality, and restriction compatibility.

use toposq::contexts::{ClosurePolicy, Context, ContextPoset};
use toposq::operators::{
    mats_close, projection_leq, spectral_decompose, CMat, Tolerances,
};
use toposq::scenario::{preset, Model};

fn mermin_model() -> Model {
    Model::build(preset("mermin-square").unwrap()).unwrap()
}

#[test]
fn order_agrees_with_algebra_inclusion() {
    for name in ["qubit-zx", "qutrit-chain", "mermin-square"] {
        let model = Model::build(preset(name).unwrap()).unwrap();
        let poset = model.presheaf.poset();
        let tol = Tolerances::default();
        let dim = poset.dim();
        for l in 0..poset.len() {
            for u in 0..poset.len() {
                let lower = poset.context_at(l);
                let upper = poset.context_at(u);
                // inclusion iff every atom of the coarser context is exactly
                // the sum of the finer atoms below it
                let mut includes = true;
                for b in lower.atoms() {
                    let mut rec = CMat::zeros(dim, dim);
                    for a in upper.atoms() {
                        if projection_leq(a, b, &tol).unwrap() {
                            rec += a.matrix();
                        }
                    }
                    if !mats_close(&rec, b.matrix(), 1e-8) {
                        includes = false;
                        break;
                    }
                }
                assert_eq!(
                    poset.is_below_idx(l, u),
                    includes,
                    "{name}: pair ({}, {})",
                    lower.id(),
                    upper.id()
                );
            }
        }
    }
}

#[test]
fn single_observable_algebra_sits_below_its_row_and_column() {
    let model = mermin_model();
    let poset = model.presheaf.poset();
    let tol = Tolerances::default();

    // the algebra generated by XI alone
    let xi = &model.scenario.observables["XI"];
    let gens: Vec<_> = spectral_decompose(xi, &tol)
        .into_iter()
        .map(|(_, e)| e)
        .collect();
    let w = Context::generate("W-XI", &gens, &tol).unwrap();

    // identify it inside the poset by atom comparison
    let hit = poset
        .contexts()
        .iter()
        .find(|c| c.same_algebra(&w, tol.eps_num))
        .expect("the XI algebra appears in the closed poset");

    // XI sits in row R2 and column C1, and the shared subalgebra is below both
    for parent in ["R2", "C1"] {
        assert!(
            poset.is_below(hit.id(), parent).unwrap(),
            "{} should lie below {parent}",
            hit.id()
        );
    }
    // one context serves both parents: the closure deduplicated it
    let twins = poset
        .contexts()
        .iter()
        .filter(|c| c.same_algebra(&w, tol.eps_num))
        .count();
    assert_eq!(twins, 1);
}

#[test]
fn refinement_maps_compose_along_all_chains() {
    let model = mermin_model();
    let poset = model.presheaf.poset();
    for low in 0..poset.len() {
        for mid in 0..poset.len() {
            if !poset.is_below_idx(low, mid) {
                continue;
            }
            for up in 0..poset.len() {
                if !poset.is_below_idx(mid, up) {
                    continue;
                }
                let m_lu = poset.atom_map_idx(low, up).unwrap();
                let m_lm = poset.atom_map_idx(low, mid).unwrap();
                let m_mu = poset.atom_map_idx(mid, up).unwrap();
                for k in 0..poset.context_at(up).num_atoms() {
                    assert_eq!(m_lu[k], m_lm[m_mu[k]]);
                }
            }
        }
    }
}

#[test]
fn character_restriction_is_compatible_with_evaluation() {
    let model = mermin_model();
    let ps = &model.presheaf;
    let poset = ps.poset();
    for upper in poset.contexts() {
        for lower in poset.contexts() {
            if lower.id() == upper.id() || !poset.is_below(lower.id(), upper.id()).unwrap() {
                continue;
            }
            for lam in ps.spectrum(upper.id()).unwrap() {
                let restricted = ps.restrict(&lam, lower.id()).unwrap();
                for s in lower.all_blocks().unwrap() {
                    let p = lower.block(s);
                    assert_eq!(
                        ps.evaluate(&restricted, &p).unwrap(),
                        ps.evaluate(&lam, &p).unwrap(),
                        "evaluation of a lower block agrees before and after restriction"
                    );
                }
            }
        }
    }
}

#[test]
fn characters_are_multiplicative_on_four_atom_contexts() {
    let model = mermin_model();
    let ps = &model.presheaf;
    let r1 = ps.poset().context("R1").unwrap();
    assert_eq!(r1.num_atoms(), 4);
    let blocks = r1.all_blocks().unwrap();
    for s1 in &blocks {
        for s2 in &blocks {
            let p = r1.block(s1.iter().copied());
            let q = r1.block(s2.iter().copied());
            let meet = r1.block(s1.intersection(s2).copied());
            for lam in ps.spectrum("R1").unwrap() {
                assert_eq!(
                    ps.evaluate(&lam, &meet).unwrap(),
                    ps.evaluate(&lam, &p).unwrap() && ps.evaluate(&lam, &q).unwrap()
                );
            }
        }
    }
}

#[test]
fn duplicate_ids_are_rejected() {
    let tol = Tolerances::default();
    let model = mermin_model();
    let r1 = model.presheaf.poset().context("R1").unwrap().clone();
    let mut clash = model.presheaf.poset().context("R2").unwrap().clone();
    // same id, different algebra
    clash = Context::from_atoms("R1", clash.atoms().to_vec(), &tol).unwrap();
    assert!(matches!(
        ContextPoset::build(&[r1, clash], ClosurePolicy::None, &tol),
        Err(toposq::Error::DuplicateId(_))
    ));
}
