//! Matrices of operators in a pseudo-orthonormal basis and the map
//! `SL(2,C)⊗SL(2,C) → SO(4,C)`.
//!
//! For a basis `{x_i}` with dual `{x̃_i}`, the representation of `R` is
//! `D_ij = ⟨x̃_i|R|x_j⟩` and `R = Σ_ij D_ij |x_i⟩⟨x̃_j|`. An operator preserves
//! the pseudo inner product exactly when `D` is complex orthogonal.

use crate::error::{Error, Result};
use crate::numerics::{Matrix, Operator2, Operator4, C64};
use crate::pseudometric::{magic_basis, spin_flip_op4, PseudoBasis};
use crate::tolerance::POST;

/// `max |M Mᵀ - I|` and `max |Mᵀ M - I|`, whichever is larger.
pub fn orthogonality_residual(m: &Operator4) -> f64 {
    let id = Operator4::identity();
    (*m * m.transpose()).max_abs_diff(&id).max((m.transpose() * *m).max_abs_diff(&id))
}

/// Complex orthogonal 4×4 matrix, `D Dᵀ = Dᵀ D = I`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RepMatrix(Operator4);

impl RepMatrix {
    /// Accepts `d` when its orthogonality residual, relative to
    /// `max(1, max|d_ij|²)`, is within 1e-9.
    pub fn new(d: Operator4) -> Result<Self> {
        let scale = d.max_abs().powi(2).max(1.0);
        let deviation = orthogonality_residual(&d) / scale;
        if !(deviation <= POST) {
            return Err(Error::InvalidBasis { deviation });
        }
        Ok(Self(d))
    }

    pub fn matrix(&self) -> &Operator4 {
        &self.0
    }

    pub fn into_inner(self) -> Operator4 {
        self.0
    }
}

/// `D_ij = ⟨x̃_i|R|x_j⟩`.
pub fn rep_matrix(r: &Operator4, basis: &PseudoBasis) -> Operator4 {
    let dual = basis.dual();
    let images = basis.vectors().map(|x| r * x);
    Matrix::from_fn(|i, j| dual[i].dot(&images[j]))
}

/// Inverse of [`rep_matrix`]: `R = Σ_ij D_ij |x_i⟩⟨x̃_j|`.
pub fn operator_from_rep(d: &Operator4, basis: &PseudoBasis) -> Operator4 {
    let dual = basis.dual();
    let mut r = Operator4::zeros();
    for i in 0..4 {
        for j in 0..4 {
            r = r + basis.vector(i).outer(&dual[j]).scale(d.0[i][j]);
        }
    }
    r
}

/// Residuals `max|R†R̃ − I|` and `max|R̃R† − I|`, whichever is larger.
pub fn pseudo_product_residual(r: &Operator4) -> f64 {
    let rt = spin_flip_op4(r);
    let id = Operator4::identity();
    (r.adjoint() * rt).max_abs_diff(&id).max((rt * r.adjoint()).max_abs_diff(&id))
}

/// Whether `R†R̃ = R̃R† = I` within `tol`.
pub fn preserves_pseudo_product(r: &Operator4, tol: f64) -> bool {
    pseudo_product_residual(r) < tol
}

/// Matrix `S` relating two pseudo-orthonormal bases, `from_i = Σ_j S_ij to_j`.
/// Complex orthogonal for valid bases.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BasisChange(Operator4);

impl BasisChange {
    pub fn matrix(&self) -> &Operator4 {
        &self.0
    }
}

pub fn basis_change(from: &PseudoBasis, to: &PseudoBasis) -> BasisChange {
    let to_dual = to.dual();
    BasisChange(Matrix::from_fn(|i, j| to_dual[j].dot(from.vector(i))))
}

/// Rescales an invertible 2×2 operator to unit determinant with the principal
/// square root of the determinant.
pub fn unimodular_rescale(a: &Operator2) -> Result<Operator2> {
    let det = a.det2();
    if !(det.norm() > 1e-12) {
        return Err(Error::Singular { det: det.norm() });
    }
    Ok(a.scale(det.sqrt().inv()))
}

fn check_unimodular(a: &Operator2) -> Result<()> {
    let det = a.det2();
    if (det - C64::new(1.0, 0.0)).norm() < POST {
        Ok(())
    } else {
        Err(Error::NotUnimodular { re: det.re, im: det.im })
    }
}

/// Image of a unimodular pair: the matrix of `A⊗B` in the magic basis.
/// The pairs `(A, B)` and `(−A, −B)` have the same image.
pub fn sl2_pair_to_so4(a: &Operator2, b: &Operator2) -> Result<RepMatrix> {
    check_unimodular(a)?;
    check_unimodular(b)?;
    RepMatrix::new(rep_matrix(&a.kron(b), &magic_basis()))
}
