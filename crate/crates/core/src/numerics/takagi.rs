//! Takagi (Autonne) factorization `M = W diag(d) Wᵀ` of a complex symmetric 4×4
//! matrix.
//!
//! Writing `M = A + iB` with `A`, `B` real symmetric, the real symmetric 8×8
//! matrix `K = [[A, B], [B, -A]]` has eigenvalues `±d_k`. For an eigenvector
//! `(x; y)` with eigenvalue `d ≥ 0`, `w = x + iy` satisfies `M·w̅ = d·w`, so the
//! positive half of the spectrum yields the Takagi vectors directly. Within a
//! degenerate positive block the real eigenvectors are orthonormal and their
//! partners `(-y; x)` live in the `-d` block, which makes the complex vectors
//! orthonormal as well. Vectors for (numerically) zero `d` are completed by
//! Gram-Schmidt against the rest.

use super::eig::symmetric_eig_real;
use super::matrix::{Operator4, C64, ZERO};
use super::svd::complete_unitary;
use crate::error::{Error, Result};
use crate::tolerance::STRUCTURAL;

#[derive(Clone, Copy, Debug)]
pub struct Takagi {
    /// Unitary factor, Takagi vectors as columns.
    pub w: Operator4,
    /// Nonnegative values, descending.
    pub d: [f64; 4],
}

impl Takagi {
    pub fn reconstruct(&self) -> Operator4 {
        let mut wd = self.w;
        for i in 0..4 {
            for j in 0..4 {
                wd.0[i][j] *= self.d[j];
            }
        }
        wd * self.w.transpose()
    }
}

const ZERO_BLOCK: f64 = 1e-13;

pub fn takagi(m: &Operator4) -> Result<Takagi> {
    let deviation = m.symmetric_deviation();
    if !(deviation <= STRUCTURAL) || !m.is_finite() {
        return Err(Error::NotSymmetric { deviation });
    }
    let sym = (*m + m.transpose()).scale_real(0.5);
    let mut k = [[0.0; 8]; 8];
    for i in 0..4 {
        for j in 0..4 {
            let z = sym.0[i][j];
            k[i][j] = z.re;
            k[i][j + 4] = z.im;
            k[i + 4][j] = z.im;
            k[i + 4][j + 4] = -z.re;
        }
    }
    let (values, vectors) = symmetric_eig_real(&k);
    let dmax = values[0].max(0.0);

    let mut w = Operator4::zeros();
    let mut d = [0.0; 4];
    let mut have = [false; 4];
    let mut accepted: Vec<[C64; 4]> = Vec::with_capacity(4);
    for slot in 0..4 {
        let val = values[slot];
        d[slot] = val.max(0.0);
        if !(val > ZERO_BLOCK * dmax) {
            continue;
        }
        let mut z: [C64; 4] = std::array::from_fn(|i| C64::new(vectors[i][slot], vectors[i + 4][slot]));
        // Guard against mixing between nearly-degenerate ±d pairs: keep the
        // vector only if it is genuinely new.
        for b in &accepted {
            let proj: C64 = (0..4).map(|i| b[i].conj() * z[i]).sum();
            for i in 0..4 {
                z[i] -= b[i] * proj;
            }
        }
        let n = z.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if n < 0.5 {
            continue;
        }
        let z = z.map(|c| c / n);
        for i in 0..4 {
            w.0[i][slot] = z[i];
        }
        have[slot] = true;
        accepted.push(z);
    }
    if have.iter().any(|h| !h) {
        for slot in 0..4 {
            if !have[slot] {
                for i in 0..4 {
                    w.0[i][slot] = ZERO;
                }
            }
        }
        complete_unitary(&mut w, &have);
    }
    Ok(Takagi { w, d })
}
