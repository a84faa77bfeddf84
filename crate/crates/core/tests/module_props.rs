use std::sync::Arc;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use smonkit::bqa::{self, Algebra, BqaModule, PdBound};
use smonkit::exactla::Fp;
use smonkit::harness::algebras;
use smonkit::layered::{self, ClassPredicate, LayeredRep};

fn algebra(which: usize, p: u64) -> Arc<Algebra> {
    let fp = Fp::new(p).unwrap();
    match which % 5 {
        0 => algebras::truncated_loop(fp, 2),
        1 => algebras::q3(fp),
        2 => algebras::linear(fp, 3),
        3 => algebras::truncated_loop(fp, 4),
        _ => algebras::kupisch_17_18_18(fp),
    }
}

fn primes() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 5])
}

fn pair(alg: &Arc<Algebra>, seed: u64) -> (BqaModule, BqaModule) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (bqa::random_module_with(alg, 3, &mut rng), bqa::random_module_with(alg, 3, &mut rng))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn nonzero_paths_are_closed_under_subpaths(which in 0..5usize) {
        let alg = algebra(which, 2);
        let bq = alg.bound_quiver();
        for p in bq.nonzero_paths() {
            for i in 0..p.arrows.len() {
                for j in i + 1..=p.arrows.len() {
                    let sub = bq.quiver().path(&p.arrows[i..j]).unwrap();
                    prop_assert!(!bq.in_ideal(&sub));
                }
            }
        }
        for a in 0..bq.quiver().arrows().len() {
            for q in bq.k_alpha(a).unwrap() {
                prop_assert!(!bq.in_ideal(&q));
                let mut arrows = q.arrows.clone();
                arrows.push(a);
                prop_assert!(bq.in_ideal(&bq.quiver().path(&arrows).unwrap()));
            }
        }
    }

    #[test]
    fn ext_zero_is_hom(which in 0..5usize, p in primes(), seed in any::<u64>()) {
        let alg = algebra(which, p);
        let (m, n) = pair(&alg, seed);
        prop_assert_eq!(bqa::ext_dim(&m, &n, 0), bqa::hom_space(&m, &n).unwrap().len());
    }

    #[test]
    fn ext_duality_over_the_opposite(which in 0..4usize, p in primes(), seed in any::<u64>()) {
        let alg = algebra(which, p);
        let (m, n) = pair(&alg, seed);
        prop_assert_eq!(bqa::ext_dims(&m, &n, 4), bqa::ext_dims(&bqa::dual(&n), &bqa::dual(&m), 4));
    }

    #[test]
    fn euler_form_on_hereditary(p in primes(), seed in any::<u64>()) {
        let alg = algebra(2, p);
        let (m, n) = pair(&alg, seed);
        let q = alg.bound_quiver().quiver();
        let (d, e) = (m.dims(), n.dims());
        let mut euler: i64 = (0..q.vertex_count()).map(|v| (d[v] * e[v]) as i64).sum();
        for a in q.arrows() {
            euler -= (d[a.source] * e[a.target]) as i64;
        }
        let ext = bqa::ext_dims(&m, &n, 2);
        prop_assert_eq!(ext[2], 0);
        prop_assert_eq!(ext[0] as i64 - ext[1] as i64, euler);
    }

    #[test]
    fn certificates_are_consistent(which in 0..5usize, seed in any::<u64>()) {
        let alg = algebra(which, 2);
        let (m, _) = pair(&alg, seed);
        let semi = bqa::semi_gp_cert(&m, 6);
        let gp = bqa::gp_cert(&m, 6);
        prop_assert!(!(semi.is_refuted() && gp.is_certified()));
        let v = (seed as usize) % alg.vertex_count();
        let p = bqa::projective(&alg, v);
        prop_assert!(bqa::gp_cert(&p, 6).is_certified() && bqa::semi_gp_cert(&p, 6).is_certified());
        prop_assert_eq!(bqa::pd_up_to(&p, 3), PdBound::Exactly(0));
    }

    #[test]
    fn projective_cover_is_minimal(which in 0..5usize, seed in any::<u64>()) {
        let alg = algebra(which, 3);
        let (m, _) = pair(&alg, seed);
        let (p, epi) = bqa::projective_cover(&m);
        prop_assert!(epi.is_surjective());
        let (k, incl) = bqa::kernel(&epi);
        let (rad, rad_incl) = bqa::radical(&p);
        // every kernel element lies in rad P
        for v in 0..alg.vertex_count() {
            let kspan = smonkit::exactla::Subspace::from_matrix(incl.maps[v].transpose());
            let rspan = smonkit::exactla::Subspace::from_matrix(rad_incl.maps[v].transpose());
            prop_assert!(kspan.is_subspace_of(&rspan));
        }
        prop_assert_eq!(k.total_dim() + m.total_dim(), p.total_dim());
        prop_assert!(rad.total_dim() <= p.total_dim());
    }
}

fn layered_sample(seed: u64) -> (Arc<layered::TensorContext>, ChaCha8Rng) {
    let contexts = algebras::default_contexts(Fp::two());
    let ctx = contexts[(seed % contexts.len() as u64) as usize].clone();
    (ctx, ChaCha8Rng::seed_from_u64(seed))
}

fn monic<R: Rng>(ctx: &Arc<layered::TensorContext>, rng: &mut R) -> LayeredRep {
    let m = bqa::random_module_with(ctx.base(), 3, rng);
    let i = rng.gen_range(0..ctx.q_vertices());
    layered::tensor(ctx, &m, &bqa::projective(ctx.factor(), i)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn extensions_of_monic_reps_are_monic_and_coker_is_exact(seed in any::<u64>()) {
        let (ctx, mut rng) = layered_sample(seed);
        let x = monic(&ctx, &mut rng);
        let y = monic(&ctx, &mut rng);
        let coeffs: Vec<u32> = (0..32).map(|_| rng.gen_range(0..2)).collect();
        let e = layered::layered_extension(&x, &y, |k| coeffs[k % coeffs.len()]);
        prop_assert!(layered::validate(&e).is_empty());
        prop_assert!(layered::smon_check(&e, &ClassPredicate::All).passed());
        for i in 0..ctx.q_vertices() {
            let (ce, cx, cy) = (layered::coker_i(&e, i), layered::coker_i(&x, i), layered::coker_i(&y, i));
            prop_assert_eq!(ce.total_dim(), cx.total_dim() + cy.total_dim());
        }
    }

    #[test]
    fn split_then_assemble_is_identity(seed in any::<u64>()) {
        let (ctx, mut rng) = layered_sample(seed);
        let x = LayeredRep::from_rep(&ctx, &ctx.presentation().random_module(3, &mut rng));
        let q = ctx.factor().bound_quiver().quiver();
        for n in (0..q.vertex_count()).filter(|&v| q.arrows_into(v).is_empty()) {
            let t = layered::split_at_source(&x, n).unwrap();
            prop_assert!(layered::assemble(&t) == x);
        }
    }

    #[test]
    fn layered_round_trip_through_flat_representation(seed in any::<u64>()) {
        let (ctx, mut rng) = layered_sample(seed);
        let x = LayeredRep::from_rep(&ctx, &ctx.presentation().random_module(3, &mut rng));
        prop_assert!(layered::validate(&x).is_empty());
        prop_assert!(LayeredRep::from_rep(&ctx, &x.to_rep()) == x);
    }
}
