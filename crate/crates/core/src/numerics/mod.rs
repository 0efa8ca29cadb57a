//! Dense complex linear algebra for the fixed sizes 2×2 and 4×4.
//!
//! All routines are pure functions over stack-allocated arrays.

mod eig;
mod matrix;
mod polar;
mod svd;
mod takagi;

pub use eig::{hermitian_eig, HermitianEig};
pub(crate) use matrix::ZERO;
pub use matrix::{Matrix, Operator2, Operator4, StateVector, C64};
pub use polar::{polar_decompose, psd_sqrt, Polar};
pub use svd::{svd, Svd};
pub use takagi::{takagi, Takagi};

/// Determinant of a 2×2 or 4×4 operator.
pub fn determinant<const N: usize>(m: &Matrix<N>) -> C64 {
    m.determinant()
}
