//! Spin flip, the pseudo inner product `C(ψ₁, ψ₂) = ⟨ψ₁|ψ̃₂⟩`, pseudo
//! normalization and pseudo-orthonormal bases.
//!
//! The state spin flip is `ψ̃ = s·(σ₂⊗σ₂)ψ*` with `s = FLIP_SIGN = -1`. With
//! this sign every vector of the magic basis is its own spin flip. Operator
//! conjugation `R̃ = (σ₂⊗σ₂) R* (σ₂⊗σ₂)` carries the sign twice and does not
//! depend on it.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::error::{Error, Result};
use crate::locc::DensityMatrix;
use crate::numerics::{psd_sqrt, svd, Matrix, Operator2, Operator4, StateVector, C64, ZERO};
use crate::tolerance::{POST, STRUCTURAL};

/// Sign multiplying `σ₂⊗σ₂` in the state spin flip.
pub const FLIP_SIGN: f64 = -1.0;

/// `σ₂⊗σ₂`, which is real.
pub fn sigma_yy() -> Operator4 {
    Operator4::from_real([[0.0, 0.0, 0.0, -1.0], [0.0, 0.0, 1.0, 0.0], [0.0, 1.0, 0.0, 0.0], [-1.0, 0.0, 0.0, 0.0]])
}

pub fn spin_flip_state(v: &StateVector) -> StateVector {
    let [a, b, c, d] = v.0.map(|z| z.conj());
    // s·(σ₂⊗σ₂) maps (a, b, c, d) to s·(-d, c, b, -a)
    let s = FLIP_SIGN;
    StateVector([-d * s, c * s, b * s, -a * s])
}

/// `Ã = σ₂ A* σ₂`.
pub fn spin_flip_op2(a: &Operator2) -> Operator2 {
    let [[p, q], [r, t]] = a.0;
    Matrix([[t.conj(), -r.conj()], [-q.conj(), p.conj()]])
}

/// `R̃ = (σ₂⊗σ₂) R* (σ₂⊗σ₂)`.
pub fn spin_flip_op4(r: &Operator4) -> Operator4 {
    let y = sigma_yy();
    y * r.conj() * y
}

/// `C(v1, v2) = ⟨v1|ṽ2⟩`. Symmetric in its arguments.
pub fn pseudo_inner(v1: &StateVector, v2: &StateVector) -> C64 {
    v1.dot(&spin_flip_state(v2))
}

/// `C(v) = C(v, v)`.
pub fn pseudo_norm(v: &StateVector) -> C64 {
    pseudo_inner(v, v)
}

/// Splits `C(v,v)` into the unique `(r, θ)` with `r > 0`, `0 ≤ θ < π` and
/// `C(r e^{iθ} v) = 1`. `None` when `|C(v,v)| <= 1e-10`.
pub fn pseudo_normalization(v: &StateVector) -> Option<(f64, f64)> {
    let c = pseudo_norm(v);
    if !(c.norm() > STRUCTURAL) {
        return None;
    }
    let r = c.norm().powf(-0.5);
    let mut theta = c.arg() / 2.0;
    if theta < 0.0 {
        theta += PI;
    }
    if theta >= PI {
        theta -= PI;
    }
    Some((r, theta))
}

pub fn pseudo_normalize(v: &StateVector) -> Result<StateVector> {
    let (r, theta) = pseudo_normalization(v).ok_or(Error::ZeroPseudoNorm { step: None })?;
    Ok(v.scale(C64::from_polar(r, theta)))
}

/// Four vectors with `C(x_i, x_j) = δ_ij`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PseudoBasis([StateVector; 4]);

impl PseudoBasis {
    /// Validates the pseudo-orthonormality relation. The Gram residual is
    /// measured relative to `max(1, ‖x_i‖·‖x_j‖)`.
    pub fn new(vectors: [StateVector; 4]) -> Result<Self> {
        let deviation = Self::gram_deviation_of(&vectors);
        if !(deviation <= POST) {
            return Err(Error::InvalidBasis { deviation });
        }
        Ok(Self(vectors))
    }

    fn gram_deviation_of(vectors: &[StateVector; 4]) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                let g = pseudo_inner(&vectors[i], &vectors[j]);
                let target = if i == j { 1.0 } else { 0.0 };
                let scale = (vectors[i].norm() * vectors[j].norm()).max(1.0);
                worst = worst.max((g - target).norm() / scale);
            }
        }
        if vectors.iter().all(StateVector::is_finite) {
            worst
        } else {
            f64::NAN
        }
    }

    pub fn vectors(&self) -> &[StateVector; 4] {
        &self.0
    }

    pub fn vector(&self, i: usize) -> &StateVector {
        &self.0[i]
    }

    /// The spin-flipped set `{x̃_i}`, itself pseudo-orthonormal.
    pub fn dual(&self) -> [StateVector; 4] {
        self.0.map(|x| spin_flip_state(&x))
    }

    pub fn dual_basis(&self) -> PseudoBasis {
        PseudoBasis(self.dual())
    }

    /// Matrix `G_ij = C(x_i, x_j)`.
    pub fn gram(&self) -> Operator4 {
        Matrix::from_fn(|i, j| pseudo_inner(&self.0[i], &self.0[j]))
    }

    /// `max |C(x_i, x_j) - δ_ij|`, absolute.
    pub fn gram_residual(&self) -> f64 {
        self.gram().max_abs_diff(&Operator4::identity())
    }

    /// `Σ_k |x_k⟩⟨x̃_k|`, the identity for a valid basis.
    pub fn completeness(&self) -> Operator4 {
        let dual = self.dual();
        (0..4).fold(Operator4::zeros(), |acc, k| acc + self.0[k].outer(&dual[k]))
    }

    /// Matrix with the basis vectors as columns.
    pub fn columns(&self) -> Operator4 {
        Operator4::from_cols(self.0.map(|v| v.0))
    }
}

/// The magic basis
/// `e₁ = (|00⟩+|11⟩)/√2`, `e₂ = i(|00⟩−|11⟩)/√2`,
/// `e₃ = i(|01⟩+|10⟩)/√2`, `e₄ = (|01⟩−|10⟩)/√2`.
pub fn magic_basis() -> PseudoBasis {
    let h = FRAC_1_SQRT_2;
    let r = |x: f64| C64::new(x, 0.0);
    let i = |x: f64| C64::new(0.0, x);
    PseudoBasis([
        StateVector([r(h), ZERO, ZERO, r(h)]),
        StateVector([i(h), ZERO, ZERO, i(-h)]),
        StateVector([ZERO, i(h), i(h), ZERO]),
        StateVector([ZERO, r(h), r(-h), ZERO]),
    ])
}

/// `(I - Σ_i |x_i⟩⟨x̃_i|)·a`.
pub fn pseudo_project_out(a: &StateVector, xs: &[StateVector]) -> StateVector {
    xs.iter().fold(*a, |acc, x| {
        let coeff = spin_flip_state(x).dot(a);
        acc - x.scale(coeff)
    })
}

/// Pseudo Schmidt orthogonalization of four linearly independent vectors.
///
/// Step `n` (1-based) fails with `ZeroPseudoNorm { step: Some(n) }` when its
/// residual has `|C| <= 1e-10`; the input is never perturbed.
pub fn pseudo_gram_schmidt(inputs: &[StateVector; 4]) -> Result<PseudoBasis> {
    let m = Operator4::from_cols(inputs.map(|v| v.0));
    let s = svd(&m).s;
    let ratio = if s[0] > 0.0 { s[3] / s[0] } else { 0.0 };
    if !(ratio > STRUCTURAL) {
        return Err(Error::LinearlyDependent { ratio });
    }
    let mut xs: Vec<StateVector> = Vec::with_capacity(4);
    for (n, a) in inputs.iter().enumerate() {
        let residual = pseudo_project_out(a, &xs);
        let x = pseudo_normalize(&residual).map_err(|_| Error::ZeroPseudoNorm { step: Some(n + 1) })?;
        xs.push(x);
    }
    PseudoBasis::new([xs[0], xs[1], xs[2], xs[3]])
}

/// Fill vectors tried, in order, when completing a partial pseudo-orthonormal set.
pub fn completion_candidates() -> [StateVector; 4] {
    [
        StateVector::from_real([1.0, 0.0, 0.0, 1.0]),
        StateVector::from_real([1.0, 0.0, 0.0, -1.0]),
        StateVector::from_real([0.0, 1.0, 1.0, 0.0]),
        StateVector::from_real([0.0, 1.0, -1.0, 0.0]),
    ]
}

fn usable(r: &StateVector) -> bool {
    let n2 = r.norm_sqr();
    n2 > 1e-16 && pseudo_norm(r).norm() > 1e-6 * n2
}

/// Extends up to four pseudo-orthonormal vectors to a full basis.
///
/// Candidates from [`completion_candidates`] are projected against the vectors
/// already present and the first residual with a usable pseudo norm is taken;
/// if every single residual is (nearly) null, pairwise sums are tried. The
/// completion is deterministic but not unique.
pub fn complete_pseudo_basis(partial: &[StateVector]) -> Result<PseudoBasis> {
    if partial.len() > 4 {
        return Err(Error::InvalidBasis { deviation: f64::NAN });
    }
    let candidates = completion_candidates();
    let mut xs: Vec<StateVector> = partial.to_vec();
    while xs.len() < 4 {
        let residuals: Vec<StateVector> = candidates.iter().map(|a| pseudo_project_out(a, &xs)).collect();
        let single = residuals.iter().copied().find(usable);
        let pick = single.or_else(|| {
            (0..4)
                .flat_map(|i| ((i + 1)..4).map(move |j| (i, j)))
                .map(|(i, j)| residuals[i] + residuals[j])
                .find(usable)
        });
        let r = pick.ok_or(Error::ZeroPseudoNorm { step: Some(xs.len() + 1) })?;
        xs.push(pseudo_normalize(&r)?);
    }
    PseudoBasis::new([xs[0], xs[1], xs[2], xs[3]])
}

/// `|⟨v|ṽ⟩|` for a unit vector.
pub fn concurrence_pure(v: &StateVector) -> Result<f64> {
    let norm = v.norm();
    if !((norm - 1.0).abs() <= POST) {
        return Err(Error::NotNormalized { norm });
    }
    Ok(pseudo_norm(v).norm())
}

/// Square roots of the eigenvalues of `ρρ̃`, descending.
///
/// Computed as the singular values of `√ρ·√ρ̃`, which avoids taking square
/// roots of eigenvalues that are zero up to rounding.
pub fn flip_spectrum(rho: &DensityMatrix) -> [f64; 4] {
    let root = psd_sqrt(rho.matrix()).expect("density matrix is PSD by construction");
    svd(&(root * spin_flip_op4(&root))).s
}

/// Wootters concurrence `max(0, s₁ − s₂ − s₃ − s₄)`.
pub fn concurrence_mixed(rho: &DensityMatrix) -> f64 {
    let s = flip_spectrum(rho);
    (s[0] - s[1] - s[2] - s[3]).max(0.0)
}
