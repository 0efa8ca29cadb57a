//! Numerical thresholds shared by every module.
//!
//! Structural preconditions are checked at `structural`, postconditions are
//! asserted at `post`, and anything beyond `hard` is an outright failure.

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Precondition checks (Hermiticity, symmetry, pseudo norms).
    pub structural: f64,
    /// Postcondition residuals of decompositions.
    pub post: f64,
    /// Hard failure threshold (e.g. negative eigenvalues, stage checks).
    pub hard: f64,
    /// `s2/s1` below which a realigned operator counts as a Kronecker product.
    pub product_form: f64,
    /// Maximum difference between normalized pseudo-spectra for transformability.
    pub spectrum: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances =
        Tolerances { structural: 1e-10, post: 1e-9, hard: 1e-8, product_form: 1e-8, spectrum: 1e-8 };
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}

pub const STRUCTURAL: f64 = Tolerances::DEFAULT.structural;
pub const POST: f64 = Tolerances::DEFAULT.post;
pub const HARD: f64 = Tolerances::DEFAULT.hard;
