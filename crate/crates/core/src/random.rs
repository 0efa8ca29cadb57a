//! Seeded samplers for states, local operators and bases.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::locc::DensityMatrix;
use crate::numerics::{svd, Matrix, Operator2, Operator4, StateVector, C64};
use crate::pseudometric::{magic_basis, PseudoBasis};

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard complex normal, `E|z|² = 1`.
pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn ginibre<const N: usize, R: Rng + ?Sized>(rng: &mut R) -> Matrix<N> {
    Matrix::from_fn(|_, _| complex_normal(rng))
}

/// Haar-random unit vector.
pub fn random_state_vector<R: Rng + ?Sized>(rng: &mut R) -> StateVector {
    let v = StateVector(std::array::from_fn(|_| complex_normal(rng)));
    v.scale(C64::new(1.0 / v.norm(), 0.0))
}

/// Ginibre matrix divided by the principal root of its determinant.
pub fn random_sl2<R: Rng + ?Sized>(rng: &mut R) -> Operator2 {
    loop {
        let g: Operator2 = ginibre(rng);
        let det = g.det2();
        if det.norm() > 1e-6 {
            return g.scale(det.sqrt().inv());
        }
    }
}

/// Like [`random_sl2`], resampling until `s₁/s₂ <= max_condition`.
pub fn random_sl2_conditioned<R: Rng + ?Sized>(rng: &mut R, max_condition: f64) -> Operator2 {
    loop {
        let a = random_sl2(rng);
        let s = svd(&a).s;
        if s[0] / s[1] <= max_condition {
            return a;
        }
    }
}

/// Haar-random element of SU(2).
pub fn random_su2<R: Rng + ?Sized>(rng: &mut R) -> Operator2 {
    let q: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
    let n = q.iter().map(|x| x * x).sum::<f64>().sqrt();
    let a = C64::new(q[0], q[1]) / n;
    let b = C64::new(q[2], q[3]) / n;
    Matrix([[a, -b.conj()], [b, a.conj()]])
}

/// Haar-random 4×4 unitary, by Gram-Schmidt on a Ginibre matrix.
pub fn random_unitary4<R: Rng + ?Sized>(rng: &mut R) -> Operator4 {
    let g: Operator4 = ginibre(rng);
    let mut cols: [[C64; 4]; 4] = std::array::from_fn(|j| g.col(j));
    for j in 0..4 {
        for k in 0..j {
            let proj: C64 = (0..4).map(|i| cols[k][i].conj() * cols[j][i]).sum();
            for i in 0..4 {
                let sub = cols[k][i] * proj;
                cols[j][i] -= sub;
            }
        }
        let n = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        cols[j] = cols[j].map(|z| z / n);
    }
    Operator4::from_cols(cols)
}

/// `GG†/tr(GG†)` for a complex normal 4×4 `G`: full rank almost surely.
pub fn random_density_matrix<R: Rng + ?Sized>(rng: &mut R) -> DensityMatrix {
    random_density_matrix_rank(rng, 4)
}

/// `GG†/tr(GG†)` for a complex normal 4×k `G`.
pub fn random_density_matrix_rank<R: Rng + ?Sized>(rng: &mut R, rank: usize) -> DensityMatrix {
    let rank = rank.clamp(1, 4);
    let g = Operator4::from_fn(|_, j| if j < rank { complex_normal(rng) } else { C64::new(0.0, 0.0) });
    let m = g * g.adjoint();
    let tr = m.trace().re;
    DensityMatrix::new(m.scale_real(1.0 / tr)).expect("GG†/tr is a valid state")
}

/// Unimodular pair `(A₀, B₀)` scaled so each has largest singular value 1:
/// a valid, invertible measurement branch.
pub fn random_filter_pair<R: Rng + ?Sized>(rng: &mut R, max_condition: f64) -> (Operator2, Operator2) {
    let a = random_sl2_conditioned(rng, max_condition);
    let b = random_sl2_conditioned(rng, max_condition);
    (a.scale_real(1.0 / svd(&a).s[0]), b.scale_real(1.0 / svd(&b).s[0]))
}

/// Image of the magic basis under a random unimodular local pair.
pub fn random_pseudo_basis<R: Rng + ?Sized>(rng: &mut R, max_condition: f64) -> PseudoBasis {
    let k = random_sl2_conditioned(rng, max_condition).kron(&random_sl2_conditioned(rng, max_condition));
    PseudoBasis::new(magic_basis().vectors().map(|e| k * e)).expect("local SL(2) pairs preserve the pseudo product")
}

/// Four independent complex normal vectors.
pub fn random_quadruple<R: Rng + ?Sized>(rng: &mut R) -> [StateVector; 4] {
    std::array::from_fn(|_| StateVector(std::array::from_fn(|_| complex_normal(rng))))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_stream() {
        let a = random_sl2(&mut seeded(7));
        let b = random_sl2(&mut seeded(7));
        assert_eq!(a, b);
        assert!((a.det2() - C64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn samplers_respect_their_groups() {
        let mut rng = seeded(1);
        let u = random_su2(&mut rng);
        assert!((u.adjoint() * u).max_abs_diff(&Operator2::identity()) < 1e-14);
        assert!((u.det2() - C64::new(1.0, 0.0)).norm() < 1e-14);
        let v = random_unitary4(&mut rng);
        assert!((v.adjoint() * v).max_abs_diff(&Operator4::identity()) < 1e-14);
        let rho = random_density_matrix_rank(&mut rng, 2);
        assert!(rho.matrix().max_abs() > 0.0);
    }
}
