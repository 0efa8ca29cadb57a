mod common;

use common::*;
use pobasis::error::{Error, Refusal};
use pobasis::locc::*;
use pobasis::numerics::{Operator2, StateVector, C64};
use pobasis::pseudometric::{concurrence_mixed, magic_basis};
use pobasis::random::{
    random_density_matrix, random_density_matrix_rank, random_filter_pair, random_pseudo_basis, random_sl2, seeded,
};
use pobasis::representation::orthogonality_residual;

fn bell() -> DensityMatrix {
    DensityMatrix::from_pure(magic_basis().vector(0)).unwrap()
}

/// Unit-spectral-norm filter computed from the singular values, not the crate's SVD.
fn normalized(a: &Operator2) -> Operator2 {
    a.scale_real(1.0 / singular_values2(a).0)
}

#[test]
fn pseudo_spectrum_of_random_states() {
    let mut rng = seeded(51);
    for _ in 0..500 {
        let rho = random_density_matrix(&mut rng);
        let s = pseudo_diagonalize(&rho).unwrap();
        assert_eq!(s.rank, 4);
        assert!(max_diff(&s.lambdas, &flip_sqrt_eigs(rho.matrix())) < 1e-8);
        assert!(s.reconstruct().max_abs_diff(rho.matrix()) < 1e-8);
        assert!(s.gram_residual() < 1e-8);
    }
}

#[test]
fn pseudo_spectrum_of_rank_deficient_states() {
    let mut rng = seeded(52);
    for k in 0..150 {
        let rank = k % 3 + 1;
        let rho = random_density_matrix_rank(&mut rng, rank);
        let s = pseudo_diagonalize(&rho).unwrap();
        assert_eq!(s.rank, rank);
        // square roots of zero eigenvalues amplify rounding, so compare λ²
        assert!(max_diff(&s.lambdas.map(|l| l * l), &flip_eigs(rho.matrix())) < 1e-12);
        assert!(s.reconstruct().max_abs_diff(rho.matrix()) < 1e-8);
        assert!(s.gram_residual() < 1e-8);
    }
}

#[test]
fn h_representation_round_trip() {
    let mut rng = seeded(53);
    for _ in 0..200 {
        let rho = random_density_matrix(&mut rng);
        let basis = random_pseudo_basis(&mut rng, 4.0);
        let h = h_representation(&rho, &basis);
        assert!(h.h.hermitian_deviation() < 1e-9 * h.h.max_abs().max(1.0));
        assert!(h.reconstruct().max_abs_diff(rho.matrix()) < 1e-9);
    }
}

#[test]
fn invertible_filters_are_always_reversible_in_the_decision() {
    let mut rng = seeded(54);
    for k in 0..300 {
        let rho = random_density_matrix(&mut rng);
        let (a0, b0) = random_filter_pair(&mut rng, f64::INFINITY);
        let (sigma, p0) = apply_local_filter(&rho, &a0, &b0).unwrap();
        assert!(p0 > 0.0 && p0 <= 1.0 + 1e-12);

        let t = transformable(&rho, &sigma, 1e-8).unwrap();
        let Decision::Yes { witness } = t.decision else { panic!("sample {k}: {:?}", t.decision) };
        assert!(max_diff(&t.rho.normalized(), &t.sigma.normalized()) < 1e-8);

        // h^σ ∝ Q h^ρ Q† in the magic basis
        assert!(orthogonality_residual(&witness) < 1e-9 * witness.max_abs().powi(2).max(1.0));
        assert!((det4(&witness) - C64::new(1.0, 0.0)).norm() < 1e-8);
        let hr = h_representation(&rho, &magic_basis()).h;
        let hs = h_representation(&sigma, &magic_basis()).h;
        let moved = witness * hr * witness.adjoint();
        let c = moved.trace().re;
        assert!(c > 0.0);
        assert!(hs.max_abs_diff(&moved.scale_real(1.0 / c)) < 1e-8);

        let plan = synthesize_action(&rho, &sigma).unwrap();
        assert!(plan.residual < 1e-8, "sample {k}: {}", plan.residual);
        assert!(plan.success_probability > 0.0 && plan.success_probability <= 1.0 + 1e-12);
        for f in [plan.a, plan.b] {
            assert!((singular_values2(&f).0 - 1.0).abs() < 1e-12);
        }
        let (out, p) = apply_local_filter(&rho, &plan.a, &plan.b).unwrap();
        assert!(out.matrix().max_abs_diff(sigma.matrix()) < 1e-8);
        assert!((p - plan.success_probability).abs() < 1e-12);
    }
}

#[test]
fn filtering_rank_deficient_states() {
    let mut rng = seeded(55);
    for k in 0..90 {
        let rho = random_density_matrix_rank(&mut rng, k % 3 + 1);
        let (a0, b0) = random_filter_pair(&mut rng, 20.0);
        let (sigma, _) = apply_local_filter(&rho, &a0, &b0).unwrap();
        let plan = synthesize_action(&rho, &sigma).unwrap();
        assert!(plan.residual < 1e-8, "sample {k}: {}", plan.residual);
    }
}

#[test]
fn mismatched_spectra_are_refused() {
    let mut rng = seeded(56);
    for k in 0..100 {
        let rho = random_density_matrix(&mut rng);
        let sigma =
            if k % 2 == 0 { random_density_matrix_rank(&mut rng, k % 3 + 1) } else { random_density_matrix(&mut rng) };
        let t = transformable(&rho, &sigma, 1e-8).unwrap();
        match t.decision {
            Decision::No(Refusal::RankMismatch { .. }) => assert!(k % 2 == 0),
            Decision::No(Refusal::SpectrumMismatch { max_difference }) => assert!(max_difference >= 1e-8),
            Decision::Yes { .. } => panic!("sample {k} accepted"),
        }
        assert!(matches!(synthesize_action(&rho, &sigma), Err(Error::NotTransformable(_))));
    }
}

#[test]
fn pure_state_concentration_matches_direct_filter() {
    let (m0, m1) = (0.9f64, 0.1f64);
    let psi = StateVector::from_real([m0.sqrt(), 0.0, 0.0, m1.sqrt()]);
    let rho = DensityMatrix::from_pure(&psi).unwrap();
    let plan = synthesize_action(&rho, &bell()).unwrap();
    assert!(plan.residual < 1e-8);

    // symmetric filter diag((μ₁/μ₀)^{1/4}, 1) on both sides, evaluated by hand
    let t = (m1 / m0).powf(0.25);
    let out = [m0.sqrt() * t * t, 0.0, 0.0, m1.sqrt()];
    let p_direct: f64 = out.iter().map(|x| x * x).sum();
    assert!((p_direct - 2.0 * m1).abs() < 1e-15);
    assert!((plan.success_probability - p_direct).abs() < 1e-6);
    assert!((concurrence_mixed(&apply_local_filter(&rho, &plan.a, &plan.b).unwrap().0) - 1.0).abs() < 1e-8);
}

#[test]
fn random_pure_states_concentrate_to_bell() {
    let mut rng = seeded(57);
    for _ in 0..100 {
        let v = pobasis::random::random_state_vector(&mut rng);
        let rho = DensityMatrix::from_pure(&v).unwrap();
        let plan = synthesize_action(&rho, &bell()).unwrap();
        let (out, p) = apply_local_filter(&rho, &plan.a, &plan.b).unwrap();
        assert!((concurrence_mixed(&out) - 1.0).abs() < 1e-8);
        // no single branch beats 2μ_min
        let (_, m1) = schmidt(&v);
        assert!(p <= 2.0 * m1 + 1e-9);
    }
}

#[test]
fn filter_branch_never_exceeds_one() {
    let mut rng = seeded(58);
    for _ in 0..200 {
        let rho = random_density_matrix(&mut rng);
        let (a, b) = (normalized(&random_sl2(&mut rng)), normalized(&random_sl2(&mut rng)));
        let (_, p) = apply_local_filter(&rho, &a, &b).unwrap();
        let k = kron(&a, &b);
        let direct = (k * *rho.matrix() * k.adjoint()).trace().re;
        assert!((p - direct).abs() < 1e-14);
        assert!(p > 0.0 && p <= 1.0 + 1e-12);
    }
}
