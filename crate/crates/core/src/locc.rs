//! Two-qubit states under local filtering `ρ ↦ (A⊗B)ρ(A⊗B)†/p`.

use crate::error::{Error, Refusal, Result};
use crate::factorization::{kronecker_factor, LocalPair};
use crate::numerics::{hermitian_eig, svd, Operator2, Operator4, StateVector, C64};
use crate::pseudometric::{complete_pseudo_basis, magic_basis, pseudo_inner, pseudo_normalize, PseudoBasis};
use crate::representation::rep_matrix;
use crate::tolerance::{Tolerances, POST, STRUCTURAL};

/// Hermitian, positive semidefinite, unit trace.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityMatrix(Operator4);

impl DensityMatrix {
    /// Validates the state and stores its Hermitian part.
    pub fn new(m: Operator4) -> Result<Self> {
        if !m.is_finite() {
            return Err(Error::InvalidState("non-finite entry".into()));
        }
        let deviation = m.hermitian_deviation();
        if !(deviation <= STRUCTURAL) {
            return Err(Error::InvalidState(format!("not Hermitian (deviation {deviation:e})")));
        }
        let h = m.hermitian_part();
        let min = hermitian_eig(&h)?.values[3];
        if min < -STRUCTURAL {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
        }
        let tr = h.trace().re;
        if !((tr - 1.0).abs() <= STRUCTURAL) {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        Ok(Self(h))
    }

    /// `|v⟩⟨v| / ⟨v|v⟩`.
    pub fn from_pure(v: &StateVector) -> Result<Self> {
        let n = v.norm_sqr();
        if !(n > 0.0) || !v.is_finite() {
            return Err(Error::InvalidState("zero or non-finite state vector".into()));
        }
        Self::new(v.outer(v).scale_real(1.0 / n))
    }

    pub fn maximally_mixed() -> Self {
        Self(Operator4::identity().scale_real(0.25))
    }

    /// `p|e₁⟩⟨e₁| + (1−p) I/4` with `e₁ = (|00⟩+|11⟩)/√2`.
    pub fn werner(p: f64) -> Result<Self> {
        let e1 = magic_basis().vector(0).to_owned();
        Self::new(e1.outer(&e1).scale_real(p) + Operator4::identity().scale_real((1.0 - p) / 4.0))
    }

    pub fn matrix(&self) -> &Operator4 {
        &self.0
    }
}

/// `h_ij = ⟨x̃_i|ρ|x̃_j⟩`, so that `ρ = Σ_ij h_ij |x_i⟩⟨x_j|`.
#[derive(Clone, Copy, Debug)]
pub struct HRep {
    pub h: Operator4,
    pub basis: PseudoBasis,
}

impl HRep {
    pub fn reconstruct(&self) -> Operator4 {
        let x = self.basis.vectors();
        let mut rho = Operator4::zeros();
        for i in 0..4 {
            for j in 0..4 {
                rho = rho + x[i].outer(&x[j]).scale(self.h.0[i][j]);
            }
        }
        rho
    }
}

pub fn h_representation(rho: &DensityMatrix, basis: &PseudoBasis) -> HRep {
    let dual = basis.dual();
    let images = dual.map(|x| rho.matrix() * x);
    HRep { h: Operator4::from_fn(|i, j| dual[i].dot(&images[j])), basis: *basis }
}

/// `ρ = Σ_k λ_k |x_k⟩⟨x_k|` with `C(x_k, x_l) = δ_kl`.
#[derive(Clone, Debug, PartialEq)]
pub struct PseudoSpectrum {
    /// Descending, nonnegative.
    pub lambdas: [f64; 4],
    /// One vector per λ above 1e-10.
    pub vectors: Vec<StateVector>,
    pub rank: usize,
}

impl PseudoSpectrum {
    pub fn reconstruct(&self) -> Operator4 {
        self.vectors.iter().zip(self.lambdas).fold(Operator4::zeros(), |acc, (x, l)| acc + x.outer(x).scale_real(l))
    }

    /// λ divided by the sum of the entries above 1e-10; smaller entries become 0.
    pub fn normalized(&self) -> [f64; 4] {
        let total: f64 = self.lambdas.iter().filter(|&&l| l > STRUCTURAL).sum();
        self.lambdas.map(|l| if l > STRUCTURAL { l / total } else { 0.0 })
    }

    /// Gram residual `max |C(x_i, x_j) − δ_ij|` among the stored vectors.
    pub fn gram_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, a) in self.vectors.iter().enumerate() {
            for (j, b) in self.vectors.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((pseudo_inner(a, b) - target).norm());
            }
        }
        worst
    }

    /// The stored vectors extended to a full pseudo-orthonormal basis.
    pub fn completed_basis(&self) -> Result<PseudoBasis> {
        complete_pseudo_basis(&self.vectors)
    }
}

/// Writes `ρ` in its own pseudo-orthonormal eigenbasis.
///
/// Fails with [`Error::Degenerate`] when a Takagi vector carries weight
/// (`‖z‖² > 1e-9`) but has pseudo norm at most 1e-10; pure product states are
/// the typical case.
pub fn pseudo_diagonalize(rho: &DensityMatrix) -> Result<PseudoSpectrum> {
    let eig = hermitian_eig(rho.matrix())?;
    let w: [StateVector; 4] = std::array::from_fn(|i| eig.state(i).scale(C64::new(eig.values[i].max(0.0).sqrt(), 0.0)));
    let tau = Operator4::from_fn(|i, j| pseudo_inner(&w[i], &w[j]));
    let t = crate::numerics::takagi(&tau)?;

    let mut lambdas = [0.0; 4];
    let mut vectors = Vec::with_capacity(4);
    for k in 0..4 {
        let z = (0..4).fold(StateVector::zero(), |acc, i| acc + w[i].scale(t.w.0[i][k]));
        if t.d[k] > STRUCTURAL {
            lambdas[k] = t.d[k];
            vectors.push(pseudo_normalize(&z)?);
        } else if z.norm_sqr() > POST {
            return Err(Error::Degenerate { index: k, weight: z.norm_sqr() });
        }
    }
    let rank = vectors.len();
    Ok(PseudoSpectrum { lambdas, vectors, rank })
}

#[derive(Clone, Debug, PartialEq)]
#[allow(clippy::large_enum_variant)]
pub enum Decision {
    /// Complex orthogonal `Q` with `det Q = 1` and `h^σ ∝ Q h^ρ Q†`, both h
    /// taken in the magic basis.
    Yes {
        witness: Operator4,
    },
    No(Refusal),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Transformability {
    pub rho: PseudoSpectrum,
    pub sigma: PseudoSpectrum,
    pub decision: Decision,
}

impl Transformability {
    pub fn is_yes(&self) -> bool {
        matches!(self.decision, Decision::Yes { .. })
    }
}

fn compare_spectra(rho: &PseudoSpectrum, sigma: &PseudoSpectrum, tol: f64) -> Option<Refusal> {
    if rho.rank != sigma.rank {
        return Some(Refusal::RankMismatch { rank_rho: rho.rank, rank_sigma: sigma.rank });
    }
    let (a, b) = (rho.normalized(), sigma.normalized());
    let max_difference = (0..4).map(|i| (a[i] - b[i]).abs()).fold(0.0, f64::max);
    if max_difference < tol {
        None
    } else {
        Some(Refusal::SpectrumMismatch { max_difference })
    }
}

/// `Σ_i s_i |x^σ_i⟩⟨x̃^ρ_i|`, which maps each `x^ρ_i` to `s_i x^σ_i`.
fn pairing_operator(from: &PseudoBasis, to: &PseudoBasis, signs: [f64; 4]) -> Operator4 {
    let dual = from.dual();
    (0..4).fold(Operator4::zeros(), |acc, i| acc + to.vector(i).outer(&dual[i]).scale_real(signs[i]))
}

/// Sign patterns on the target vectors whose pairing operator is in
/// `SO(4,C)`, in a fixed order. Flipping one target vector flips the
/// determinant and leaves `σ` unchanged.
fn proper_sign_patterns(from: &PseudoBasis, to: &PseudoBasis) -> Vec<[f64; 4]> {
    let base = rep_matrix(&pairing_operator(from, to, [1.0; 4]), &magic_basis()).determinant();
    let parity = if base.re >= 0.0 { 1.0 } else { -1.0 };
    (0..16u32)
        .map(|mask| std::array::from_fn(|i| if mask & (1 << i) != 0 { -1.0 } else { 1.0 }))
        .filter(|s: &[f64; 4]| s.iter().product::<f64>() == parity)
        .collect()
}

fn paired_bases(rho: &PseudoSpectrum, sigma: &PseudoSpectrum) -> Result<(PseudoBasis, PseudoBasis)> {
    Ok((rho.completed_basis()?, sigma.completed_basis()?))
}

/// Decides whether `ρ → σ` is possible by a single invertible local filter.
///
/// Both spectra are normalized to unit sum over entries above 1e-10; the
/// answer is yes when the ranks agree and the normalized vectors differ by
/// less than `tol` everywhere.
pub fn transformable(rho: &DensityMatrix, sigma: &DensityMatrix, tol: f64) -> Result<Transformability> {
    let rs = pseudo_diagonalize(rho)?;
    let ss = pseudo_diagonalize(sigma)?;
    let decision = match compare_spectra(&rs, &ss, tol) {
        Some(refusal) => Decision::No(refusal),
        None => {
            let (from, to) = paired_bases(&rs, &ss)?;
            let signs = proper_sign_patterns(&from, &to)[0];
            let witness = rep_matrix(&pairing_operator(&from, &to, signs), &magic_basis());
            Decision::Yes { witness }
        }
    };
    Ok(Transformability { rho: rs, sigma: ss, decision })
}

/// A single filtering branch realizing `ρ → σ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TransformPlan {
    /// Largest singular value 1.
    pub a: Operator2,
    /// Largest singular value 1.
    pub b: Operator2,
    pub success_probability: f64,
    /// `max |apply(ρ) − σ|`.
    pub residual: f64,
}

fn unit_spectral_norm(m: &Operator2) -> Operator2 {
    m.scale_real(1.0 / svd(m).s[0])
}

/// `tr(ρ · A†A⊗B†B)`.
pub fn filter_probability(rho: &DensityMatrix, a: &Operator2, b: &Operator2) -> f64 {
    let e = (a.adjoint() * *a).kron(&(b.adjoint() * *b));
    (*rho.matrix() * e).trace().re
}

/// Builds local filters for `ρ → σ` from the two pseudo-diagonal bases.
///
/// Among the pairings with determinant +1 the plan with the largest success
/// probability is returned; ties keep the first in enumeration order.
pub fn synthesize_action(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<TransformPlan> {
    synthesize_action_with_tol(rho, sigma, Tolerances::DEFAULT.spectrum)
}

pub fn synthesize_action_with_tol(rho: &DensityMatrix, sigma: &DensityMatrix, tol: f64) -> Result<TransformPlan> {
    let decision = transformable(rho, sigma, tol)?;
    if let Decision::No(refusal) = decision.decision {
        return Err(Error::NotTransformable(refusal));
    }
    let (from, to) = paired_bases(&decision.rho, &decision.sigma)?;
    let mut best: Option<TransformPlan> = None;
    let mut last_err = None;
    for signs in proper_sign_patterns(&from, &to) {
        let r = pairing_operator(&from, &to, signs);
        let pair: LocalPair = match kronecker_factor(&r, Tolerances::DEFAULT.product_form) {
            Ok(p) => p,
            Err(e) => {
                last_err = Some(e);
                continue;
            }
        };
        let a = unit_spectral_norm(&pair.a);
        let b = unit_spectral_norm(&pair.b);
        let (out, p) = match apply_local_filter(rho, &a, &b) {
            Ok(v) => v,
            Err(e) => {
                last_err = Some(e);
                continue;
            }
        };
        let residual = out.matrix().max_abs_diff(sigma.matrix());
        if best.is_none_or(|b| p > b.success_probability) {
            best = Some(TransformPlan { a, b, success_probability: p, residual });
        }
    }
    best.ok_or_else(|| last_err.unwrap_or(Error::NotProductForm { ratio: f64::NAN }))
}

/// `σ = (A⊗B)ρ(A⊗B)†/p` with `p = tr(ρ A†A⊗B†B)`.
pub fn apply_local_filter(rho: &DensityMatrix, a: &Operator2, b: &Operator2) -> Result<(DensityMatrix, f64)> {
    let k = a.kron(b);
    let p = filter_probability(rho, a, b);
    if !(p > 1e-12) {
        return Err(Error::ZeroProbability { probability: p });
    }
    let out = (k * *rho.matrix() * k.adjoint()).scale_real(1.0 / p);
    Ok((DensityMatrix::new(out.hermitian_part())?, p))
}
