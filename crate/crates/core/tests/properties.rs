use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;

use slicekit::calculus::{build_from_derivatives, derivative, DerivativeAssignment};
use slicekit::cube::{embed_to_slice, fourier_transform, pullback_from_slice, CubeFunction};
use slicekit::harmonic::{degree, level_weights, project_levels};
use slicekit::io::{cube_from_json, cube_to_json, slice_from_json, slice_to_json};
use slicekit::noise::{laplacian, level_eigenvalue};
use slicekit::rational::{format_q, parse_q, Q};
use slicekit::slice::{apply_permutation, inner_product, make_domain, Permutation, SliceDomain, SliceFunction};
use slicekit::structure::approximate;
use slicekit::tuples::{all_tuples, enumerate_shifted_sorted, expansion_tree, is_shifted_sorted, measure, KTuple};

fn rational() -> impl Strategy<Value = Q> {
    (-20i64..=20, 1i64..=9).prop_map(|(a, b)| Q::new(BigInt::from(a), BigInt::from(b)))
}

fn domain() -> impl Strategy<Value = Arc<SliceDomain>> {
    (2usize..=7).prop_flat_map(|n| (Just(n), 0..=n)).prop_map(|(n, ell)| make_domain(n, ell).unwrap())
}

fn function() -> impl Strategy<Value = SliceFunction> {
    domain().prop_flat_map(|d| {
        prop::collection::vec(rational(), d.len()).prop_map(move |v| SliceFunction::new(d.clone(), v).unwrap())
    })
}

fn function_on(n: usize, ell: usize) -> impl Strategy<Value = SliceFunction> {
    let d = make_domain(n, ell).unwrap();
    prop::collection::vec(rational(), d.len()).prop_map(move |v| SliceFunction::new(d.clone(), v).unwrap())
}

fn permutation(n: usize) -> impl Strategy<Value = Permutation> {
    Just((1..=n).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_map(|images| Permutation::from_images(&images).unwrap())
}

fn tuple(n: usize, k: usize) -> impl Strategy<Value = KTuple> {
    let all = all_tuples(n, k);
    (0..all.len()).prop_map(move |i| all[i].clone())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rationals_print_and_parse(x in rational()) {
        prop_assert_eq!(parse_q(&format_q(&x)).unwrap(), x);
    }

    #[test]
    fn level_parts_sum_to_f_and_weights_add_up(f in function()) {
        let ell = f.domain().ell();
        let dec = project_levels(&f, ell).unwrap();
        let sum = dec.parts.iter().fold(SliceFunction::zero(f.domain()), |acc, p| &acc + p);
        prop_assert_eq!(&sum, &f);
        prop_assert_eq!(level_weights(&f).unwrap().total(), f.norm_sq());
    }

    #[test]
    fn low_projection_is_idempotent(f in function(), k in 0usize..=3) {
        let k = k.min(f.domain().ell());
        let low = project_levels(&f, k).unwrap().low;
        prop_assert_eq!(&project_levels(&low, k).unwrap().low, &low);
        prop_assert!(degree(&low).unwrap() <= k);
    }

    #[test]
    fn laplacian_is_diagonal_on_levels(f in function()) {
        let n = f.domain().n();
        let dec = project_levels(&f, f.domain().ell()).unwrap();
        for (d, part) in dec.parts.iter().enumerate() {
            prop_assert_eq!(laplacian(part).unwrap(), part.scale(&level_eigenvalue(n, d)));
        }
    }

    #[test]
    fn permutations_preserve_level_weights(f in function_on(6, 3), pi in permutation(6)) {
        let g = apply_permutation(&f, &pi).unwrap();
        prop_assert_eq!(level_weights(&g).unwrap(), level_weights(&f).unwrap());
    }

    #[test]
    fn permutation_action_composes(a in permutation(6), b in permutation(6), x in 0u64..64) {
        prop_assert_eq!(a.compose(&b).act(x), a.act(b.act(x)));
        prop_assert_eq!(a.inverse().act(a.act(x)), x);
    }

    #[test]
    fn derivative_is_an_orthogonal_projection(f in function_on(6, 3), g in function_on(6, 3), p in tuple(6, 2)) {
        let df = derivative(&f, &p).unwrap();
        prop_assert_eq!(&derivative(&df, &p).unwrap(), &df);
        prop_assert_eq!(inner_product(&df, &g).unwrap(), inner_product(&f, &derivative(&g, &p).unwrap()).unwrap());
        prop_assert!(df.norm_sq() <= f.norm_sq());
    }

    #[test]
    fn level_one_functions_have_no_second_derivatives(f in function_on(7, 3), p in tuple(7, 2)) {
        let low = project_levels(&f, 1).unwrap().low;
        prop_assert!(derivative(&low, &p).unwrap().is_zero());
    }

    #[test]
    fn expansion_tree_reaches_shifted_sorted_leaves(p in tuple(7, 2)) {
        let tree = expansion_tree(&p, 7).unwrap();
        let m = measure(&p, 7).unwrap().m;
        let leaves = tree.leaves();
        prop_assert!(leaves.iter().all(|l| is_shifted_sorted(&l.tuple)));
        prop_assert!((leaves.len() as u128) <= 1u128 << m);
        for (parent, child) in tree.edges() {
            prop_assert!(child.measure.m < parent.measure.m);
        }
    }

    #[test]
    fn constructor_realises_its_assignment(
        values in prop::collection::vec(-4i64..=4, 14),
        ell in 2usize..=5,
    ) {
        let n = 7;
        let d = make_domain(n, ell).unwrap();
        let mut it = values.into_iter().cycle();
        let z = DerivativeAssignment::from_fn(n, 2, |_| Q::new(BigInt::from(it.next().unwrap()), BigInt::from(4))).unwrap();
        let f = build_from_derivatives(&d, &z).unwrap();
        prop_assert!(degree(&f).unwrap() <= 2);
        for p in enumerate_shifted_sorted(n, 2) {
            let dp = derivative(&f, &p).unwrap();
            let expected = slicekit::harmonic::psi_function(&d, &p).unwrap().scale(z.get(&p).unwrap());
            prop_assert_eq!(dp, expected);
        }
    }

    #[test]
    fn approximation_fixes_low_degree_boolean_inputs(i in 1usize..=7, j in 1usize..=7) {
        let d = make_domain(7, 3).unwrap();
        let f = slicekit::harmonic::and_function(&d, &[i, j]).unwrap();
        let r = approximate(&f, 2).unwrap();
        prop_assert_eq!(r.g, f);
        prop_assert!(r.distance.is_zero());
    }

    #[test]
    fn json_round_trips(f in function()) {
        let text = slice_to_json(&f).unwrap();
        prop_assert_eq!(slice_from_json(&text).unwrap(), f);
    }

    #[test]
    fn cube_fourier_is_invertible(values in prop::collection::vec(rational(), 16)) {
        let f = CubeFunction::new(4, values).unwrap();
        let e = fourier_transform(&f);
        prop_assert_eq!(e.reconstruct(), f.clone());
        prop_assert_eq!(e.total_weight(), f.norm_sq());
        prop_assert_eq!(cube_from_json(&cube_to_json(&f).unwrap()).unwrap(), f);
    }

    #[test]
    fn embedding_then_pullback_is_the_identity(values in prop::collection::vec(0i64..=1, 8), m in 4usize..=7) {
        let f = CubeFunction::new(3, values.into_iter().map(|v| Q::from_integer(v.into())).collect()).unwrap();
        let g = embed_to_slice(&f, 2 * m).unwrap();
        prop_assert_eq!(pullback_from_slice(&g, 3).unwrap(), f);
    }
}
