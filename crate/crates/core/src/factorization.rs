//! Recovering local factors from operators on C²⊗C².
//!
//! Realignment convention: entry `M[(i⊗k), (j⊗l)]` (row `2i+k`, column `2j+l`)
//! is moved to row `2i+j`, column `2k+l`:
//!
//! ```text
//!            col: (k,l) = 00    01    10    11
//! row (i,j)=00     M[0][0] M[0][1] M[1][0] M[1][1]
//!           01     M[0][2] M[0][3] M[1][2] M[1][3]
//!           10     M[2][0] M[2][1] M[3][0] M[3][1]
//!           11     M[2][2] M[2][3] M[3][2] M[3][3]
//! ```
//!
//! A Kronecker product `A⊗B` realigns to the rank-one matrix `vec(A)·vec(B)ᵀ`.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::numerics::{polar_decompose, psd_sqrt, svd, Matrix, Operator2, Operator4, C64};
use crate::pseudometric::{magic_basis, spin_flip_op4, PseudoBasis};
use crate::representation::{basis_change, operator_from_rep, RepMatrix};
use crate::tolerance::{Tolerances, HARD};

/// `scale·(A⊗B)` with `det A = det B = 1`.
///
/// `(A, B)` and `(−A, −B)` describe the same operator. Constructors pick the
/// sign of each factor so that its first nonzero entry (row-major) has
/// argument in `(−π/2, π/2]`; any leftover sign sits on `scale`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LocalPair {
    pub a: Operator2,
    pub b: Operator2,
    pub scale: C64,
}

fn canonical_sign(m: &Operator2) -> f64 {
    let cutoff = 1e-12 * m.max_abs();
    for z in m.0.iter().flatten() {
        if z.norm() > cutoff {
            let arg = z.arg();
            return if arg > -FRAC_PI_2 && arg <= FRAC_PI_2 { 1.0 } else { -1.0 };
        }
    }
    1.0
}

impl LocalPair {
    /// Normalizes `coeff·(a⊗b)` to unit-determinant factors.
    pub fn from_factors(a: &Operator2, b: &Operator2, coeff: C64) -> Result<Self> {
        let (na, nb) = (a.frobenius_norm(), b.frobenius_norm());
        if na == 0.0 || nb == 0.0 {
            return Err(Error::Singular { det: 0.0 });
        }
        let (a, b) = (a.scale_real(1.0 / na), b.scale_real(1.0 / nb));
        let coeff = coeff * na * nb;
        let (da, db) = (a.det2(), b.det2());
        let worst = da.norm().min(db.norm());
        if !(worst >= 1e-12) {
            return Err(Error::Singular { det: worst });
        }
        let (ra, rb) = (da.sqrt(), db.sqrt());
        let mut a = a.scale(ra.inv());
        let mut b = b.scale(rb.inv());
        let mut scale = coeff * ra * rb;
        let sa = canonical_sign(&a);
        let sb = canonical_sign(&b);
        a = a.scale_real(sa);
        b = b.scale_real(sb);
        scale *= sa * sb;
        Ok(Self { a, b, scale })
    }

    /// `scale·(A⊗B)`.
    pub fn operator(&self) -> Operator4 {
        self.a.kron(&self.b).scale(self.scale)
    }

    /// `A⊗B` without the scale.
    pub fn kron(&self) -> Operator4 {
        self.a.kron(&self.b)
    }

    /// Largest factor-wise deviation from the unimodular pair `(a0, b0)`,
    /// modulo the kernel `{(I, I), (−I, −I)}`. A sign left on `scale` is
    /// folded into `A` first, so the result is only meaningful when
    /// `scale ≈ ±1`.
    pub fn pair_distance(&self, a0: &Operator2, b0: &Operator2) -> f64 {
        let fold = if self.scale.re < 0.0 { -1.0 } else { 1.0 };
        let a = self.a.scale_real(fold);
        let plus = a.max_abs_diff(a0).max(self.b.max_abs_diff(b0));
        let minus = a.max_abs_diff(&-*a0).max(self.b.max_abs_diff(&-*b0));
        plus.min(minus)
    }

    /// Factor-wise distance between two pairs up to the kernel, after
    /// checking that both describe the same operator up to `tol`.
    pub fn distance(&self, other: &LocalPair) -> f64 {
        let op = self.operator().max_abs_diff(&other.operator());
        let fold = |p: &LocalPair| {
            if p.scale.re < 0.0 {
                p.a.scale_real(-1.0)
            } else {
                p.a
            }
        };
        let (a1, a2) = (fold(self), fold(other));
        let plus = a1.max_abs_diff(&a2).max(self.b.max_abs_diff(&other.b));
        let minus = a1.max_abs_diff(&-a2).max(self.b.max_abs_diff(&-other.b));
        op.max(plus.min(minus))
    }
}

/// Index reshuffle under which `A⊗B` becomes `vec(A)·vec(B)ᵀ`.
pub fn realign(m: &Operator4) -> Operator4 {
    Operator4::from_fn(|row, col| {
        let (i, j) = (row / 2, row % 2);
        let (k, l) = (col / 2, col % 2);
        m.0[2 * i + k][2 * j + l]
    })
}

/// `s₂/s₁` of the realigned matrix: zero for an exact Kronecker product.
pub fn product_form_ratio(m: &Operator4) -> f64 {
    let s = svd(&realign(m)).s;
    if s[0] > 0.0 {
        s[1] / s[0]
    } else {
        f64::NAN
    }
}

/// Decides whether `m` is a Kronecker product and, if so, returns its
/// unimodular factors.
///
/// Fails with [`Error::NotProductForm`] when `s₂/s₁ >= tol`, and with
/// [`Error::Singular`] when a recovered factor has vanishing determinant.
pub fn kronecker_factor(m: &Operator4, tol: f64) -> Result<LocalPair> {
    if !(m.max_abs() > 0.0) || !m.is_finite() {
        return Err(Error::Singular { det: 0.0 });
    }
    let d = svd(&realign(m));
    let ratio = d.s[1] / d.s[0];
    if !(ratio < tol) {
        return Err(Error::NotProductForm { ratio });
    }
    let u = d.u.col(0);
    let v = d.v.col(0);
    let a = Matrix([[u[0], u[1]], [u[2], u[3]]]);
    let b = Matrix([[v[0].conj(), v[1].conj()], [v[2].conj(), v[3].conj()]]);
    let pair = LocalPair::from_factors(&a, &b, C64::new(d.s[0], 0.0))?;
    let residual = pair.operator().max_abs_diff(m);
    if !(residual <= tol.max(HARD) * m.max_abs()) {
        return Err(Error::NotProductForm { ratio: residual / m.max_abs() });
    }
    Ok(pair)
}

/// Factors `H = Σ_i |x̃_i⟩⟨x̃_i|`, which is Hermitian, positive and a product
/// for every pseudo-orthonormal basis.
pub fn frame_factor(basis: &PseudoBasis) -> Result<LocalPair> {
    let h = frame_operator(basis);
    let scale = h.max_abs();
    let deviation = h.hermitian_deviation() / scale;
    if !(deviation <= HARD) {
        return Err(Error::NotHermitian { deviation });
    }
    kronecker_factor(&h.hermitian_part(), Tolerances::DEFAULT.product_form)
}

/// `Σ_i |x̃_i⟩⟨x̃_i|`.
pub fn frame_operator(basis: &PseudoBasis) -> Operator4 {
    basis.dual().iter().fold(Operator4::zeros(), |acc, x| acc + x.outer(x))
}

/// Inverse of the representation map: assembles `R = Σ_ij D_ij |x_i⟩⟨x̃_j|` and
/// factors it by realignment.
pub fn so4_to_sl2_pair_direct(d: &RepMatrix, basis: &PseudoBasis) -> Result<LocalPair> {
    let r = operator_from_rep(d.matrix(), basis);
    kronecker_factor(&r, 1e-8)
}

/// Intermediate objects of the polar route.
#[derive(Clone, Debug)]
pub struct PolarRoute {
    pub pair: LocalPair,
    /// The assembled operator `R`.
    pub r: Operator4,
    /// Hermitian part `√(RR†)`.
    pub p: Operator4,
    /// Unitary part, `R = P·U`.
    pub u: Operator4,
    /// Factors of `P` (positive) and of `U` (unitary up to scale).
    pub p_factors: (Operator2, Operator2),
    pub u_factors: LocalPair,
    /// `max |Σ_m |y_m⟩⟨y_m| − RR†|`.
    pub y_residual: f64,
    /// `max |U − Ũ|`.
    pub u_flip_residual: f64,
}

fn stage(stage: u8, detail: impl Into<String>) -> Error {
    Error::Stage { stage, detail: detail.into() }
}

/// Rotates a factor that is Hermitian up to a global phase into a positive
/// definite matrix. Returns the matrix and the phase removed.
fn phase_to_positive(m: &Operator2) -> (Operator2, C64) {
    let tr = m.trace();
    let phase = tr / tr.norm();
    (m.scale(phase.conj()), phase)
}

/// Inverse of the representation map along the constructive polar route:
/// `R = √(RR†)·U`, the positive part factored through the `y`-basis and the
/// unitary part through `U = Ũ`.
pub fn so4_to_sl2_pair_polar(d: &RepMatrix, basis: &PseudoBasis) -> Result<LocalPair> {
    so4_to_sl2_pair_polar_traced(d, basis).map(|route| route.pair)
}

pub fn so4_to_sl2_pair_polar_traced(d: &RepMatrix, basis: &PseudoBasis) -> Result<PolarRoute> {
    // (1) assemble R
    let r = operator_from_rep(d.matrix(), basis);
    let r_scale = r.max_abs();

    // (2) polar split
    let polar = polar_decompose(&r)?;
    let (p, u) = (polar.p, polar.u);

    // (3) y_m = Σ_i S*_im x'_i, with x̃_i = Σ_j S_ij e_j and x'_i = R x_i
    let s = *basis_change(&basis.dual_basis(), &magic_basis()).matrix();
    let images = basis.vectors().map(|x| r * x);
    let ys: [_; 4] = std::array::from_fn(|m| {
        (0..4).fold(crate::numerics::StateVector::zero(), |acc, i| acc + images[i].scale(s.0[i][m].conj()))
    });
    let rr = r * r.adjoint();
    let sum_yy = ys.iter().fold(Operator4::zeros(), |acc, y| acc + y.outer(y));
    let y_residual = sum_yy.max_abs_diff(&rr);
    if !(y_residual <= HARD * rr.max_abs().max(1.0)) {
        return Err(stage(3, format!("Σ|y⟩⟨y| differs from RR† by {y_residual:e}")));
    }

    // (4) RR† = Σ|y_m⟩⟨y_m| is the frame operator of the basis {ỹ_m}
    let y_dual = PseudoBasis::new(ys.map(|y| crate::pseudometric::spin_flip_state(&y)))
        .map_err(|e| stage(4, format!("y-basis is not pseudo-orthonormal: {e}")))?;
    let h = frame_factor(&y_dual).map_err(|e| stage(4, format!("RR† does not factor: {e}")))?;
    let (ha, pa_phase) = phase_to_positive(&h.a);
    let (hb, pb_phase) = phase_to_positive(&h.b);
    let coeff = h.scale * pa_phase * pb_phase;
    if !(coeff.re > 0.0 && coeff.im.abs() <= HARD * coeff.re) {
        return Err(stage(4, format!("RR† factors carry a non-positive scale {coeff}")));
    }
    let herm = |m: &Operator2| -> Result<Operator2> {
        let dev = m.hermitian_deviation() / m.max_abs();
        if !(dev <= HARD) {
            return Err(stage(4, format!("factor of RR† is not Hermitian up to phase ({dev:e})")));
        }
        psd_sqrt(&m.hermitian_part()).map_err(|e| stage(4, e.to_string()))
    };
    let pa = herm(&ha)?;
    let pb = herm(&hb)?;
    let root_coeff = coeff.re.sqrt();
    let p_residual = pa.kron(&pb).scale_real(root_coeff).max_abs_diff(&p);
    if !(p_residual <= HARD * p.max_abs().max(1.0)) {
        return Err(stage(4, format!("√(RR†) factors reconstruct with residual {p_residual:e}")));
    }

    // (5) U = Ũ, hence U is a local unitary
    let u_flip_residual = u.max_abs_diff(&spin_flip_op4(&u));
    if !(u_flip_residual <= HARD) {
        return Err(stage(5, format!("U differs from Ũ by {u_flip_residual:e}")));
    }
    let conj_check = (r.adjoint() * r).max_abs_diff(&(u.adjoint() * rr * u));
    if !(conj_check <= HARD * rr.max_abs().max(1.0)) {
        return Err(stage(5, format!("R†R ≠ U†RR†U (residual {conj_check:e})")));
    }
    let uf = kronecker_factor(&u, Tolerances::DEFAULT.product_form)
        .map_err(|e| stage(5, format!("U does not factor: {e}")))?;

    // (6) compose
    let a = pa * uf.a;
    let b = pb * uf.b;
    let pair = LocalPair::from_factors(&a, &b, uf.scale * root_coeff).map_err(|e| stage(6, e.to_string()))?;
    let residual = pair.operator().max_abs_diff(&r);
    if !(residual <= HARD * r_scale.max(1.0)) {
        return Err(stage(6, format!("composed factors reconstruct R with residual {residual:e}")));
    }
    Ok(PolarRoute {
        pair,
        r,
        p,
        u,
        p_factors: (pa.scale_real(root_coeff.sqrt()), pb.scale_real(root_coeff.sqrt())),
        u_factors: uf,
        y_residual,
        u_flip_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::representation::{rep_matrix, sl2_pair_to_so4};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn swap() -> Operator4 {
        Operator4::from_real([[1.0, 0.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0], [0.0, 1.0, 0.0, 0.0], [0.0, 0.0, 0.0, 1.0]])
    }

    fn cnot() -> Operator4 {
        Operator4::from_real([[1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0], [0.0, 0.0, 0.0, 1.0], [0.0, 0.0, 1.0, 0.0]])
    }

    #[test]
    fn realign_of_kron_is_rank_one() {
        let a = Matrix([[c(1.0, 0.2), c(0.3, -0.1)], [c(0.0, 0.5), c(2.0, 0.0)]]);
        let b = Matrix([[c(0.4, 0.0), c(1.0, 1.0)], [c(-0.2, 0.3), c(0.7, -0.6)]]);
        let r = realign(&a.kron(&b));
        for i in 0..4 {
            for k in 0..4 {
                assert!((r.0[i][k] - a.0[i / 2][i % 2] * b.0[k / 2][k % 2]).norm() < 1e-15);
            }
        }
        let pair = kronecker_factor(&a.kron(&b), 1e-8).unwrap();
        assert!(pair.operator().max_abs_diff(&a.kron(&b)) < 1e-14);
        assert!((pair.a.det2() - c(1.0, 0.0)).norm() < 1e-14);
        assert!((pair.b.det2() - c(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn entangling_gates_are_not_products() {
        assert!(matches!(kronecker_factor(&swap(), 1e-8), Err(Error::NotProductForm { .. })));
        assert!(matches!(kronecker_factor(&cnot(), 1e-8), Err(Error::NotProductForm { .. })));
    }

    #[test]
    fn singular_factor_is_reported() {
        let proj = Operator2::real_diag([1.0, 0.0]);
        assert!(matches!(kronecker_factor(&proj.kron(&Operator2::identity()), 1e-8), Err(Error::Singular { .. })));
    }

    #[test]
    fn canonical_sign_is_deterministic() {
        let a = Matrix([[c(-1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]]);
        let pair = LocalPair::from_factors(&a, &a, c(1.0, 0.0)).unwrap();
        assert_eq!(pair.a, Operator2::identity());
        assert_eq!(pair.b, Operator2::identity());
        assert!((pair.scale - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn frame_on_magic_basis_is_identity() {
        let pair = frame_factor(&magic_basis()).unwrap();
        assert!(pair.a.max_abs_diff(&Operator2::identity()) < 1e-14);
        assert!(pair.b.max_abs_diff(&Operator2::identity()) < 1e-14);
        assert!((pair.scale - c(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn inverse_of_plane_rotation() {
        // rotation by θ in the (e1, e2) plane only comes from the pair
        // (diag(e^{iθ/2}, e^{-iθ/2}), diag(e^{iθ/2}, e^{-iθ/2}))
        let theta: f64 = 0.9;
        let (co, si) = (theta.cos(), theta.sin());
        let d = RepMatrix::new(Operator4::from_real([
            [co, -si, 0.0, 0.0],
            [si, co, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
        ]))
        .unwrap();
        let half = Operator2::diag([C64::from_polar(1.0, theta / 2.0), C64::from_polar(1.0, -theta / 2.0)]);
        for pair in
            [so4_to_sl2_pair_direct(&d, &magic_basis()).unwrap(), so4_to_sl2_pair_polar(&d, &magic_basis()).unwrap()]
        {
            assert!(pair.pair_distance(&half, &half) < 1e-12, "{pair:?}");
        }
        let back = sl2_pair_to_so4(&half, &half).unwrap();
        assert!(back.matrix().max_abs_diff(d.matrix()) < 1e-14);
    }

    #[test]
    fn polar_route_on_identity() {
        let d = RepMatrix::new(Operator4::identity()).unwrap();
        let route = so4_to_sl2_pair_polar_traced(&d, &magic_basis()).unwrap();
        assert!(route.p.max_abs_diff(&Operator4::identity()) < 1e-14);
        assert!(route.u.max_abs_diff(&Operator4::identity()) < 1e-14);
        assert!(route.pair.pair_distance(&Operator2::identity(), &Operator2::identity()) < 1e-14);
    }

    #[test]
    fn improper_orthogonal_matrix_has_no_preimage() {
        let d = RepMatrix::new(rep_matrix(&swap(), &magic_basis())).unwrap();
        assert!(matches!(so4_to_sl2_pair_direct(&d, &magic_basis()), Err(Error::NotProductForm { .. })));
        assert!(so4_to_sl2_pair_polar(&d, &magic_basis()).is_err());
    }
}
