use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Why a transformation request was answered in the negative.
#[derive(Clone, Debug, PartialEq)]
pub enum Refusal {
    /// The two states have a different number of nonzero pseudo-eigenvalues.
    RankMismatch { rank_rho: usize, rank_sigma: usize },
    /// The normalized pseudo-spectra differ by more than the tolerance.
    SpectrumMismatch { max_difference: f64 },
}

impl std::fmt::Display for Refusal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Refusal::RankMismatch { rank_rho, rank_sigma } => {
                write!(f, "pseudo-rank mismatch ({rank_rho} vs {rank_sigma})")
            }
            Refusal::SpectrumMismatch { max_difference } => {
                write!(f, "normalized pseudo-spectra differ by {max_difference:e}")
            }
        }
    }
}

#[derive(Clone, Debug, Error, PartialEq)]
pub enum Error {
    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },
    #[error("matrix is not positive semidefinite (smallest eigenvalue {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },
    #[error("matrix is singular (|det| = {det:e})")]
    Singular { det: f64 },
    #[error("matrix is not complex symmetric (max deviation {deviation:e})")]
    NotSymmetric { deviation: f64 },
    #[error("vector has zero pseudo norm{}", step.map(|s| format!(" at step {s}")).unwrap_or_default())]
    ZeroPseudoNorm { step: Option<usize> },
    #[error("input vectors are linearly dependent (singular value ratio {ratio:e})")]
    LinearlyDependent { ratio: f64 },
    #[error("state vector is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },
    #[error("invalid density matrix: {0}")]
    InvalidState(String),
    #[error("basis is not pseudo-orthonormal (Gram deviation {deviation:e})")]
    InvalidBasis { deviation: f64 },
    #[error("operator is not unimodular (det = {re} + {im}i)")]
    NotUnimodular { re: f64, im: f64 },
    #[error("operator is not of product form (s2/s1 = {ratio:e})")]
    NotProductForm { ratio: f64 },
    #[error("polar factorization failed at stage {stage}: {detail}")]
    Stage { stage: u8, detail: String },
    #[error("state cannot be pseudo-diagonalized: component {index} has zero pseudo norm but weight {weight:e}")]
    Degenerate { index: usize, weight: f64 },
    #[error("transformation is not possible: {0}")]
    NotTransformable(Refusal),
    #[error("filter branch has zero probability ({probability:e})")]
    ZeroProbability { probability: f64 },
}
