//! Reference computations through nalgebra, independent of the crate's own
//! kernels.
#![allow(dead_code)]

use nalgebra::{Complex, Matrix2, Matrix4, SymmetricEigen};
use pobasis::numerics::{Operator2, Operator4, StateVector, C64};

pub type NaC = Complex<f64>;

pub fn na4(m: &Operator4) -> Matrix4<NaC> {
    Matrix4::from_fn(|i, j| NaC::new(m.0[i][j].re, m.0[i][j].im))
}

pub fn na2(m: &Operator2) -> Matrix2<NaC> {
    Matrix2::from_fn(|i, j| NaC::new(m.0[i][j].re, m.0[i][j].im))
}

pub fn from_na4(m: &Matrix4<NaC>) -> Operator4 {
    Operator4::from_fn(|i, j| C64::new(m[(i, j)].re, m[(i, j)].im))
}

pub fn det4(m: &Operator4) -> C64 {
    let d = na4(m).determinant();
    C64::new(d.re, d.im)
}

pub fn kron(a: &Operator2, b: &Operator2) -> Operator4 {
    let k = na2(a).kronecker(&na2(b));
    Operator4::from_fn(|i, j| C64::new(k[(i, j)].re, k[(i, j)].im))
}

/// `Y M* Y` with `Y = σ_y⊗σ_y`, built from the Pauli matrix itself.
pub fn flip_op(m: &Operator4) -> Operator4 {
    let sy = Matrix2::new(NaC::new(0.0, 0.0), NaC::new(0.0, -1.0), NaC::new(0.0, 1.0), NaC::new(0.0, 0.0));
    let y = sy.kronecker(&sy);
    from_na4(&(y * na4(m).conjugate() * y))
}

/// Descending `eig(ρρ̃)`, via the Hermitian matrix `√ρ ρ̃ √ρ` which shares
/// its spectrum.
pub fn flip_eigs(rho: &Operator4) -> [f64; 4] {
    let e = SymmetricEigen::new(na4(rho));
    let root = e.eigenvectors
        * Matrix4::from_diagonal(&e.eigenvalues.map(|x| NaC::new(x.max(0.0).sqrt(), 0.0)))
        * e.eigenvectors.adjoint();
    let rt = na4(&flip_op(rho));
    let h = root * rt * root;
    let h = (h + h.adjoint()) * NaC::new(0.5, 0.0);
    let mut v: Vec<f64> = SymmetricEigen::new(h).eigenvalues.iter().copied().collect();
    v.sort_by(|a, b| b.partial_cmp(a).unwrap());
    [v[0], v[1], v[2], v[3]]
}

/// Descending `√eig(ρρ̃)`.
pub fn flip_sqrt_eigs(rho: &Operator4) -> [f64; 4] {
    flip_eigs(rho).map(|x| x.max(0.0).sqrt())
}

/// Schmidt coefficients `μ₀ ≥ μ₁` (squared) of a unit two-qubit vector.
pub fn schmidt(v: &StateVector) -> (f64, f64) {
    let a = v.amplitudes();
    let m = Matrix2::new(
        NaC::new(a[0].re, a[0].im),
        NaC::new(a[1].re, a[1].im),
        NaC::new(a[2].re, a[2].im),
        NaC::new(a[3].re, a[3].im),
    );
    let s = m.singular_values();
    let (x, y) = (s[0].max(s[1]), s[0].min(s[1]));
    (x * x, y * y)
}

pub fn singular_values2(m: &Operator2) -> (f64, f64) {
    let s = na2(m).singular_values();
    (s[0].max(s[1]), s[0].min(s[1]))
}

pub fn eigenvalues_hermitian(m: &Operator4) -> [f64; 4] {
    let mut v: Vec<f64> = SymmetricEigen::new(na4(m)).eigenvalues.iter().copied().collect();
    v.sort_by(|a, b| b.partial_cmp(a).unwrap());
    [v[0], v[1], v[2], v[3]]
}

pub fn singular_values4(m: &Operator4) -> [f64; 4] {
    let mut v: Vec<f64> = na4(m).singular_values().iter().copied().collect();
    v.sort_by(|a, b| b.partial_cmp(a).unwrap());
    [v[0], v[1], v[2], v[3]]
}

/// `⟨a|ψ̃⟩` written out by hand: `ψ̃ = −(σ_y⊗σ_y)ψ*`.
pub fn pseudo_inner_by_hand(a: &StateVector, b: &StateVector) -> C64 {
    let b = b.amplitudes();
    let flipped = [b[3].conj(), -b[2].conj(), -b[1].conj(), b[0].conj()];
    (0..4).map(|i| a.amplitudes()[i].conj() * flipped[i]).sum()
}

pub fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
