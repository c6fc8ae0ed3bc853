//! Module invariants as properties over random trees and parameters.

use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use treegibbs::asymptotics::analyze_toll;
use treegibbs::counting::{
    count_by_internal, count_by_leaves, count_by_root, count_full, count_kr, count_mk, from_parens,
    leaves_with_left_sibling, psi, to_parens, BigCount,
};
use treegibbs::oracle::{bfs_wiener, depth_sums, eval_by_join};
use treegibbs::properties::{
    eval_additive, eval_polynomial_toll, internal_root_distance, leaf_root_distance, path_length, wiener_index,
    AdditiveProperty,
};
use treegibbs::sampler::Sampler;
use treegibbs::series::{build_exact_tables, build_tables, WeightTriple};
use treegibbs::stats::Welford;
use treegibbs::toll::PolynomialToll;
use treegibbs::{join, subtree_records, unjoin, PlaneTree, TreeView};

fn arb_tree() -> impl Strategy<Value = PlaneTree> {
    Just(PlaneTree::single_vertex()).prop_recursive(6, 80, 4, |inner| {
        prop::collection::vec(inner, 1..5).prop_map(|children| {
            let mut steps = Vec::new();
            for c in children {
                steps.push(true);
                steps.extend_from_slice(c.steps());
                steps.push(false);
            }
            PlaneTree::from_steps(steps).unwrap()
        })
    })
}

fn small_rational() -> impl Strategy<Value = BigRational> {
    (1i64..12, 1i64..12).prop_map(|(p, q)| BigRational::new(p.into(), q.into()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn join_unjoin_round_trip(t1 in arb_tree(), t2 in arb_tree()) {
        let j = join(&t1, &t2);
        prop_assert_eq!(j.edges(), t1.edges() + t2.edges() + 1);
        prop_assert_eq!(unjoin(&j).unwrap(), (t1, t2));
    }

    #[test]
    fn parens_round_trip(t in arb_tree()) {
        let s = to_parens(&t);
        prop_assert_eq!(s.len(), 2 * t.edges());
        prop_assert_eq!(from_parens(&s).unwrap(), t);
    }

    #[test]
    fn psi_statistics(t in arb_tree()) {
        let p = psi(&t);
        let s = t.stats();
        prop_assert_eq!(p.edges(), s.edges);
        prop_assert_eq!(p.view().leftmost_path(), s.root_degree);
        prop_assert_eq!(leaves_with_left_sibling(&p), s.internal);
        if s.edges > 0 {
            prop_assert_eq!(p.stats().leaves, s.edges + 1 - s.leaves);
        }
    }

    #[test]
    fn psi_join_recursion(t1 in arb_tree(), t2 in arb_tree()) {
        prop_assert_eq!(psi(&join(&t1, &t2)), join(&psi(&t2), &psi(&t1)));
    }

    #[test]
    fn distances_match_oracles(t in arb_tree()) {
        prop_assert_eq!(wiener_index(&t), bfs_wiener(&t));
        let (all, leaf, internal) = depth_sums(&t);
        prop_assert_eq!(path_length(&t), all);
        prop_assert_eq!(leaf_root_distance(&t), leaf);
        prop_assert_eq!(internal_root_distance(&t), internal);
        let recs = subtree_records(&t);
        prop_assert_eq!(recs.len(), t.edges());
        prop_assert_eq!(recs.iter().map(|r| r.depth as u64).sum::<u64>(), all);
    }

    #[test]
    fn additive_matches_join_recursion(t in arb_tree(), c in -5i64..5) {
        let p = AdditiveProperty::new(|v: TreeView<'_>| (v.leaves() * v.root_degree()) as i64 - 1, c);
        prop_assert_eq!(eval_additive(&p, &t), eval_by_join(&p, &t));
    }

    #[test]
    fn polynomial_tolls_are_linear(t in arb_tree(), x in -6i64..6, y in -6i64..6) {
        let f = PolynomialToll::parse("t*n + l0").unwrap();
        let g = PolynomialToll::parse("L1 - t^2").unwrap();
        let k = |v: i64| PolynomialToll::constant(BigRational::from_integer(v.into()));
        let combo = k(x).mul(&f).add(&k(y).mul(&g));
        let lhs = eval_polynomial_toll(&combo, &t).to_f64();
        let rhs = x as f64 * eval_polynomial_toll(&f, &t).to_f64() + y as f64 * eval_polynomial_toll(&g, &t).to_f64();
        prop_assert!((lhs - rhs).abs() < 1e-9 * rhs.abs().max(1.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn counting_marginals(n in 1usize..40, x in 0usize..40) {
        let sum_r: BigCount = (0..=n).map(|r| count_kr(n, x, r)).sum();
        prop_assert_eq!(sum_r, count_by_leaves(n, x));
        let sum_k: BigCount = (0..=n).map(|k| count_kr(n, k, x)).sum();
        prop_assert_eq!(sum_k, count_by_root(n, x));
        let sum_mk: BigCount = (0..=n).map(|k| count_mk(n, x, k)).sum();
        prop_assert_eq!(sum_mk, count_by_internal(n, x));
    }

    #[test]
    fn count_full_sums_to_count_mk(n in 1usize..30, m in 0usize..30, k in 0usize..30) {
        let total: BigCount = (0..=n).map(|r| count_full(n, m, k, r)).sum();
        prop_assert_eq!(total, count_mk(n, m, k));
    }

    #[test]
    fn exact_series_identities(a in small_rational(), b in small_rational(), c in small_rational()) {
        let t = build_exact_tables(&a, &b, &c, 25);
        prop_assert!(t.recurrence_residual(&a, &b).iter().all(Zero::is_zero));
        prop_assert!(t.g_star_residual().iter().all(Zero::is_zero));
    }

    #[test]
    fn float_series_identities(a in 0.05f64..5.0, b in 0.05f64..5.0, c in 0.05f64..5.0) {
        let w = WeightTriple::new(a, b, c).unwrap();
        let t = build_tables(&w, 300);
        prop_assert!(t.recurrence_residual(&w) < 1e-10);
        prop_assert!(t.g_star_residual() < 1e-10);
    }

    #[test]
    fn sampled_trees_have_requested_shape(n in 0usize..300, h in 1usize..4, seed in any::<u64>()) {
        let s = Sampler::new(WeightTriple::new(0.7, 1.3, 0.4).unwrap(), n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = s.sample(n, &mut rng).unwrap();
        prop_assert_eq!(t.edges(), n);
        let table = s.bounded_root_table(h, n).unwrap();
        let mut out = Vec::new();
        s.sample_bounded_into(&table, n, &mut rng, &mut out).unwrap();
        let b = PlaneTree::from_steps(out).unwrap();
        prop_assert_eq!(b.edges(), n);
        prop_assert!(b.stats().root_degree <= h);
        let again = s.sample(n, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        prop_assert_eq!(again, t);
    }

    #[test]
    fn q_constant_invariants(
        d0 in 0u32..3, d1 in 0u32..3, dt in 0u32..3, dn in 0u32..2,
        alpha in -1.0f64..1.0, beta in -1.0f64..1.0,
    ) {
        prop_assume!(d0 + d1 + dt + dn > 0);
        let src = format!("t^{dt}*n^{dn}*l0^{d0}*L1^{d1} + 1");
        let f = PolynomialToll::parse(&src).unwrap();
        let a = analyze_toll(&f).unwrap();
        prop_assert!(a.uniform_flag);
        prop_assert_eq!(a.q_constant(0.0, 0.0).unwrap(), 1.0);
        let q = a.q_constant(alpha, beta).unwrap();
        for k in 1..=3 {
            let qk = a.q_from_q_k(k, alpha, beta).unwrap();
            prop_assert!((qk - q).abs() <= 1e-10 * q.abs());
        }
        for k in 1..=5 {
            prop_assert!((a.v_k(k) + 0.5 - a.v_prime * k as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn welford_merge_is_order_free(xs in prop::collection::vec(-1e3f64..1e3, 2..200), cut in 0usize..200) {
        let cut = cut.min(xs.len());
        let mut whole = Welford::default();
        xs.iter().for_each(|&x| whole.push(x));
        let (mut a, mut b) = (Welford::default(), Welford::default());
        xs[..cut].iter().for_each(|&x| a.push(x));
        xs[cut..].iter().for_each(|&x| b.push(x));
        a.merge(&b);
        prop_assert_eq!(a.count(), whole.count());
        prop_assert!((a.mean() - whole.mean()).abs() < 1e-9 * whole.mean().abs().max(1.0));
        prop_assert!((a.variance() - whole.variance()).abs() < 1e-7 * whole.variance().max(1.0));
    }
}
