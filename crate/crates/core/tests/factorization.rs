mod common;

use common::*;
use pobasis::error::Error;
use pobasis::factorization::*;
use pobasis::numerics::{Operator2, Operator4, C64};
use pobasis::pseudometric::magic_basis;
use pobasis::random::{complex_normal, ginibre, random_pseudo_basis, random_sl2, random_unitary4, seeded};
use pobasis::representation::{rep_matrix, sl2_pair_to_so4, RepMatrix};
use proptest::prelude::*;

#[test]
fn round_trip_through_both_routes() {
    let mut rng = seeded(41);
    for k in 0..1000 {
        let (a, b) = (random_sl2(&mut rng), random_sl2(&mut rng));
        let d = sl2_pair_to_so4(&a, &b).unwrap();
        let direct = so4_to_sl2_pair_direct(&d, &magic_basis()).unwrap();
        assert!(direct.pair_distance(&a, &b) < 1e-8, "sample {k}");
        let polar = so4_to_sl2_pair_polar(&d, &magic_basis()).unwrap();
        assert!(polar.distance(&direct) < 1e-7, "sample {k}");
    }
}

#[test]
fn round_trip_in_random_bases() {
    let mut rng = seeded(42);
    for _ in 0..200 {
        let basis = random_pseudo_basis(&mut rng, 4.0);
        let (a, b) = (random_sl2(&mut rng), random_sl2(&mut rng));
        let d = RepMatrix::new(rep_matrix(&kron(&a, &b), &basis)).unwrap();
        let direct = so4_to_sl2_pair_direct(&d, &basis).unwrap();
        let polar = so4_to_sl2_pair_polar(&d, &basis).unwrap();
        assert!(direct.pair_distance(&a, &b) < 1e-8);
        assert!(polar.pair_distance(&a, &b) < 1e-7);
    }
}

#[test]
fn polar_route_intermediates() {
    let mut rng = seeded(43);
    for _ in 0..100 {
        let (a, b) = (random_sl2(&mut rng), random_sl2(&mut rng));
        let d = sl2_pair_to_so4(&a, &b).unwrap();
        let route = so4_to_sl2_pair_polar_traced(&d, &magic_basis()).unwrap();
        let r = kron(&a, &b);
        assert!((route.p * route.u).max_abs_diff(&r) < 1e-10 * r.max_abs());
        let (pa, pb) = route.p_factors;
        assert!(kron(&pa, &pb).max_abs_diff(&route.p) < 1e-10 * route.p.max_abs());
        assert!(route.u_flip_residual < 1e-10);
        // the unitary part is local: its factors are unitary up to scale
        let ua = route.u_factors.a;
        assert!((ua.adjoint() * ua).max_abs_diff(&Operator2::identity()) < 1e-10);
    }
}

#[test]
fn random_products_factor_and_generic_operators_do_not() {
    let mut rng = seeded(44);
    for _ in 0..300 {
        let (a, b) = (ginibre::<2, _>(&mut rng), ginibre::<2, _>(&mut rng));
        let c = complex_normal(&mut rng);
        let m = kron(&a, &b).scale(c);
        let pair = kronecker_factor(&m, 1e-8).unwrap();
        assert!(pair.operator().max_abs_diff(&m) < 1e-12 * m.max_abs());
        assert!((pair.a.det2() - C64::new(1.0, 0.0)).norm() < 1e-10);
        assert!((pair.b.det2() - C64::new(1.0, 0.0)).norm() < 1e-10);

        let g: Operator4 = ginibre(&mut rng);
        assert!(matches!(kronecker_factor(&g, 1e-8), Err(Error::NotProductForm { .. })));
        assert!(matches!(kronecker_factor(&random_unitary4(&mut rng), 1e-8), Err(Error::NotProductForm { .. })));
    }
}

#[test]
fn realignment_matches_index_table() {
    let m = Operator4::from_fn(|i, j| C64::new((4 * i + j) as f64, 0.0));
    let r = realign(&m);
    let expect = [[0, 1, 4, 5], [2, 3, 6, 7], [8, 9, 12, 13], [10, 11, 14, 15]];
    for (i, row) in expect.iter().enumerate() {
        for (j, &e) in row.iter().enumerate() {
            assert_eq!(r.0[i][j].re, e as f64);
        }
    }
}

#[test]
fn frame_operator_is_positive_product() {
    let mut rng = seeded(45);
    for _ in 0..100 {
        let basis = random_pseudo_basis(&mut rng, 4.0);
        let h = frame_operator(&basis);
        assert!(h.hermitian_deviation() < 1e-10 * h.max_abs());
        assert!(eigenvalues_hermitian(&h)[3] > 0.0);
        let pair = frame_factor(&basis).unwrap();
        assert!(pair.operator().max_abs_diff(&h) < 1e-10 * h.max_abs());
    }
}

proptest! {
    #[test]
    fn factoring_is_stable_under_the_kernel(e in prop::array::uniform8((-2.0f64..2.0, -2.0f64..2.0))) {
        let a = Operator2::from_fn(|i, j| C64::new(e[2 * i + j].0, e[2 * i + j].1));
        let b = Operator2::from_fn(|i, j| C64::new(e[4 + 2 * i + j].0, e[4 + 2 * i + j].1));
        prop_assume!(a.det2().norm() > 1e-3 && b.det2().norm() > 1e-3);
        let p1 = kronecker_factor(&kron(&a, &b), 1e-8).unwrap();
        let p2 = kronecker_factor(&kron(&-a, &-b), 1e-8).unwrap();
        prop_assert!(p1.distance(&p2) < 1e-10 * p1.operator().max_abs().max(1.0));
        // canonical signs make the representative unique
        prop_assert!(p1.a.max_abs_diff(&p2.a) < 1e-10 * p1.a.max_abs().max(1.0));
    }
}
