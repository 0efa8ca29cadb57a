use super::eig::hermitian_eig;
use super::matrix::{Matrix, Operator4, C64};
use super::svd::svd;
use crate::error::{Error, Result};
use crate::tolerance::{HARD, STRUCTURAL};

/// Principal square root of a Hermitian positive semidefinite matrix.
///
/// Eigenvalues in `[-1e-8, 0)` are clamped to zero; anything below is
/// rejected with [`Error::NotPsd`].
pub fn psd_sqrt<const N: usize>(m: &Matrix<N>) -> Result<Matrix<N>> {
    let eig = hermitian_eig(m)?;
    let min = eig.values[N - 1];
    if min < -HARD {
        return Err(Error::NotPsd { min_eigenvalue: min });
    }
    let root =
        Matrix::<N>::from_fn(
            |i, j| {
                if i == j {
                    C64::new(eig.values[i].max(0.0).sqrt(), 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            },
        );
    Ok((eig.vectors * root * eig.vectors.adjoint()).hermitian_part())
}

/// Left polar decomposition `R = P·U`.
#[derive(Clone, Copy, Debug)]
pub struct Polar {
    /// Hermitian positive factor `√(RR†)`.
    pub p: Operator4,
    /// Unitary factor.
    pub u: Operator4,
}

/// Polar decomposition of an invertible 4×4 operator.
///
/// Both factors are read off one SVD `R = WΣV†` as `P = WΣW†` and `U = WV†`,
/// which equals `√(RR†)` and `P⁻¹R` without forming the inverse.
pub fn polar_decompose(r: &Operator4) -> Result<Polar> {
    let det = r.determinant();
    if !(det.norm() > 1e-12) {
        return Err(Error::Singular { det: det.norm() });
    }
    let d = svd(r);
    let mut ws = d.u;
    for i in 0..4 {
        for j in 0..4 {
            ws.0[i][j] *= d.s[j];
        }
    }
    let p = (ws * d.u.adjoint()).hermitian_part();
    let u = d.u * d.v.adjoint();
    debug_assert!(p.hermitian_deviation() <= STRUCTURAL);
    Ok(Polar { p, u })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::Operator2;

    #[test]
    fn sqrt_of_diagonal() {
        let s = psd_sqrt(&Operator4::real_diag([4.0, 1.0, 0.0, 9.0])).unwrap();
        assert!(s.max_abs_diff(&Operator4::real_diag([2.0, 1.0, 0.0, 3.0])) < 1e-15);
    }

    #[test]
    fn negative_eigenvalue_rejected() {
        let r = psd_sqrt(&Operator4::real_diag([1.0, 1.0, 1.0, -1e-6]));
        assert!(matches!(r, Err(Error::NotPsd { .. })));
        // tiny negative noise is clamped
        assert!(psd_sqrt(&Operator4::real_diag([1.0, 1.0, 1.0, -1e-11])).is_ok());
    }

    #[test]
    fn sqrt_2x2() {
        let m = Operator2::from_real([[5.0, 4.0], [4.0, 5.0]]);
        let s = psd_sqrt(&m).unwrap();
        assert!(s.max_abs_diff(&Operator2::from_real([[2.0, 1.0], [1.0, 2.0]])) < 1e-14);
    }

    #[test]
    fn polar_of_unitary_and_positive() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let u0 = Operator2::from_real([[h, h], [-h, h]]).kron(&Operator2::identity());
        let pol = polar_decompose(&u0).unwrap();
        assert!(pol.p.max_abs_diff(&Operator4::identity()) < 1e-14);
        assert!(pol.u.max_abs_diff(&u0) < 1e-14);

        let d = Operator4::real_diag([2.0, 1.0, 1.0, 0.5]);
        let pol = polar_decompose(&d).unwrap();
        assert!(pol.p.max_abs_diff(&d) < 1e-14);
        assert!(pol.u.max_abs_diff(&Operator4::identity()) < 1e-14);
    }

    #[test]
    fn polar_rejects_singular() {
        let r = Operator4::real_diag([1.0, 1.0, 1.0, 0.0]);
        assert!(matches!(polar_decompose(&r), Err(Error::Singular { .. })));
    }
}
