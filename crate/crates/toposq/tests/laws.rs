//! Property tests for the algebraic laws, driven by seeds so every structure
//! is reproducible from the failing case.

use proptest::prelude::*;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use toposq::contexts::{ClosurePolicy, Context, ContextPoset};
use toposq::daseinisation::daseinise;
use toposq::measures::measure;
use toposq::operators::{projection_join, projection_leq, Projection, Tolerances};
use toposq::random;
use toposq::scenario::{preset, Model};
use toposq::spectrum::SpectralPresheaf;
use toposq::subobjects::random_clopen;
use toposq::truth::truth_value;

fn mermin() -> SpectralPresheaf {
    Model::build(preset("mermin-square").unwrap()).unwrap().presheaf
}

fn qutrit() -> SpectralPresheaf {
    Model::build(preset("qutrit-chain").unwrap()).unwrap().presheaf
}

/// A random context: a random orthonormal basis partitioned into blocks.
fn random_context(dim: usize, seed: u64) -> Context {
    let tol = Tolerances::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u = random::unitary(dim, &mut rng);
    let cut = rng.gen_range(1..dim);
    let col_proj = |range: std::ops::Range<usize>| {
        let mut m = toposq::operators::CMat::zeros(dim, dim);
        for k in range {
            let col = u.column(k).into_owned();
            m += &col * col.adjoint();
        }
        Projection::new_with(m, &tol).unwrap()
    };
    Context::generate(
        format!("R{seed}"),
        &[col_proj(0..cut), col_proj(cut..dim)],
        &tol,
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_clopen_subobjects_are_restriction_closed(seed in any::<u64>()) {
        let ps = mermin();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_clopen(&ps, &mut rng);
        prop_assert!(s.check_restriction_closed(&ps).is_ok());
        let t = random_clopen(&ps, &mut rng);
        prop_assert!(s.meet(&t).unwrap().check_restriction_closed(&ps).is_ok());
        prop_assert!(s.join(&t).unwrap().check_restriction_closed(&ps).is_ok());
        prop_assert!(s.implies(&t, &ps).unwrap().check_restriction_closed(&ps).is_ok());
        prop_assert!(s.negate(&ps).unwrap().check_restriction_closed(&ps).is_ok());
    }

    #[test]
    fn heyting_adjunction_sampled_on_mermin(seed in any::<u64>()) {
        let ps = mermin();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let z = random_clopen(&ps, &mut rng);
        let s1 = random_clopen(&ps, &mut rng);
        let s2 = random_clopen(&ps, &mut rng);
        let imp = s1.implies(&s2, &ps).unwrap();
        prop_assert_eq!(
            z.meet(&s1).unwrap().leq(&s2).unwrap(),
            z.leq(&imp).unwrap()
        );
    }

    #[test]
    fn projection_order_is_a_partial_order(dim in 2usize..=4, seed in any::<u64>()) {
        let tol = Tolerances::default();
        let ctx = random_context(dim, seed);
        let blocks: Vec<Projection> = ctx
            .all_blocks()
            .unwrap()
            .into_iter()
            .map(|s| ctx.block(s))
            .collect();
        for p in &blocks {
            prop_assert!(projection_leq(p, p, &tol).unwrap());
        }
        for p in &blocks {
            for q in &blocks {
                if projection_leq(p, q, &tol).unwrap() && projection_leq(q, p, &tol).unwrap() {
                    prop_assert!(p.approx_eq(q, 10.0 * tol.eps_num));
                }
                for r in &blocks {
                    if projection_leq(p, q, &tol).unwrap() && projection_leq(q, r, &tol).unwrap() {
                        prop_assert!(projection_leq(p, r, &tol).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn daseinisation_is_monotone(seed in any::<u64>()) {
        let ps = qutrit();
        let tol = Tolerances::default();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random::proper_projection(3, &mut rng);
        let q = projection_join(&p, &random::projection(3, 1, &mut rng), &tol).unwrap();
        let dp = daseinise(&p, &ps).unwrap();
        let dq = daseinise(&q, &ps).unwrap();
        prop_assert!(dp.leq(&dq).unwrap());
        prop_assert!(dp.check_restriction_closed(&ps).is_ok());
    }

    #[test]
    fn measures_are_antitone_and_modular(seed in any::<u64>()) {
        let ps = qutrit();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rho = random::density(3, &mut rng);
        let s1 = random_clopen(&ps, &mut rng);
        let s2 = random_clopen(&ps, &mut rng);
        let m1 = measure(&rho, &s1, &ps).unwrap();
        let m2 = measure(&rho, &s2, &ps).unwrap();
        let mj = measure(&rho, &s1.join(&s2).unwrap(), &ps).unwrap();
        let mm = measure(&rho, &s1.meet(&s2).unwrap(), &ps).unwrap();
        prop_assert!(m1.is_antitone(ps.poset(), 1e-9));
        for (id, v1) in m1.values() {
            let lhs = mj.values()[id] + mm.values()[id];
            prop_assert!((lhs - (v1 + m2.values()[id])).abs() <= 1e-9);
        }
    }

    #[test]
    fn truth_values_are_global_elements(seed in any::<u64>()) {
        let ps = qutrit();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let psi = random::pure_state(3, &mut rng);
        let s = random_clopen(&ps, &mut rng);
        let v = truth_value(&psi, &s, &ps).unwrap();
        prop_assert!(v.validate_global(ps.poset()).is_ok());
    }

    #[test]
    fn poset_build_is_deterministic(seed in any::<u64>()) {
        let tol = Tolerances::default();
        let ctx = random_context(3, seed);
        let ids = |poset: &ContextPoset| {
            poset.contexts().iter().map(|c| c.id().to_string()).collect::<Vec<_>>()
        };
        let a = ContextPoset::build(std::slice::from_ref(&ctx), ClosurePolicy::Subalgebras, &tol).unwrap();
        let b = ContextPoset::build(std::slice::from_ref(&ctx), ClosurePolicy::Subalgebras, &tol).unwrap();
        prop_assert_eq!(ids(&a), ids(&b));
        prop_assert_eq!(a.strict_pairs(), b.strict_pairs());
    }
}
