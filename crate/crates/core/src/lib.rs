//! Pseudo-orthonormal bases for two qubits.
//!
//! The spin flip `ψ ↦ ψ̃` defines a complex symmetric bilinear form
//! `C(ψ₁, ψ₂) = ⟨ψ₁|ψ̃₂⟩`. Local operators `A⊗B` with `det A = det B = 1`
//! preserve it, and their matrices in a pseudo-orthonormal basis form
//! `SO(4,C)`. The crate builds that representation, inverts it, and uses it to
//! decide and construct local filters between two-qubit states.
//!
//! ```
//! use pobasis::locc::{synthesize_action, DensityMatrix};
//! use pobasis::numerics::StateVector;
//! use pobasis::pseudometric::magic_basis;
//!
//! let weak = DensityMatrix::from_pure(&StateVector::from_real([0.9f64.sqrt(), 0.0, 0.0, 0.1f64.sqrt()])).unwrap();
//! let bell = DensityMatrix::from_pure(magic_basis().vector(0)).unwrap();
//! let plan = synthesize_action(&weak, &bell).unwrap();
//! assert!((plan.success_probability - 0.2).abs() < 1e-6);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod error;
pub mod factorization;
pub mod locc;
pub mod numerics;
pub mod pseudometric;
pub mod random;
pub mod representation;
pub mod tolerance;

pub use error::{Error, Refusal, Result};
pub use factorization::{kronecker_factor, so4_to_sl2_pair_direct, so4_to_sl2_pair_polar, LocalPair};
pub use locc::{
    apply_local_filter, pseudo_diagonalize, synthesize_action, transformable, Decision, DensityMatrix, PseudoSpectrum,
    TransformPlan,
};
pub use numerics::{Operator2, Operator4, StateVector, C64};
pub use pseudometric::{magic_basis, pseudo_inner, spin_flip_op2, spin_flip_op4, spin_flip_state, PseudoBasis};
pub use representation::{rep_matrix, sl2_pair_to_so4, RepMatrix};
