//! One-sided (Hestenes) Jacobi SVD. Small singular values come out with
//! absolute accuracy of order `ε‖M‖`, which the product-form test relies on.

use super::matrix::{Matrix, C64, ZERO};

const MAX_SWEEPS: usize = 64;

/// `M = U diag(s) V†` with `s` descending and nonnegative.
#[derive(Clone, Copy, Debug)]
pub struct Svd<const N: usize> {
    pub u: Matrix<N>,
    pub s: [f64; N],
    pub v: Matrix<N>,
}

impl<const N: usize> Svd<N> {
    pub fn reconstruct(&self) -> Matrix<N> {
        let mut us = self.u;
        for i in 0..N {
            for j in 0..N {
                us.0[i][j] *= self.s[j];
            }
        }
        us * self.v.adjoint()
    }
}

fn col_dot<const N: usize>(a: &Matrix<N>, p: usize, q: usize) -> C64 {
    (0..N).map(|k| a.0[k][p].conj() * a.0[k][q]).sum()
}

fn col_norm_sqr<const N: usize>(a: &Matrix<N>, p: usize) -> f64 {
    (0..N).map(|k| a.0[k][p].norm_sqr()).sum()
}

fn rotate<const N: usize>(m: &mut Matrix<N>, p: usize, q: usize, c: f64, s: f64, phc: C64) {
    for k in 0..N {
        let (mp, mq) = (m.0[k][p], m.0[k][q]);
        m.0[k][p] = mp * c - mq * phc * s;
        m.0[k][q] = mp * s + mq * phc * c;
    }
}

/// Fills the columns not flagged in `have` so that `u` becomes unitary, by
/// Gram-Schmidt over the standard basis. Flagged columns must be orthonormal.
pub(crate) fn complete_unitary<const N: usize>(u: &mut Matrix<N>, have: &[bool; N]) {
    let mut basis: Vec<[C64; N]> = (0..N).filter(|&k| have[k]).map(|k| u.col(k)).collect();
    let mut missing = (0..N).filter(|&k| !have[k]).peekable();
    for e in 0..N {
        let Some(&slot) = missing.peek() else { break };
        let mut w = [ZERO; N];
        w[e] = C64::new(1.0, 0.0);
        for _ in 0..2 {
            for b in &basis {
                let proj: C64 = (0..N).map(|k| b[k].conj() * w[k]).sum();
                for k in 0..N {
                    w[k] -= b[k] * proj;
                }
            }
        }
        let n: f64 = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n < 0.5 {
            continue;
        }
        let w = w.map(|z| z / n);
        for k in 0..N {
            u.0[k][slot] = w[k];
        }
        basis.push(w);
        missing.next();
    }
}

pub fn svd<const N: usize>(m: &Matrix<N>) -> Svd<N> {
    let mut a = *m;
    let mut v = Matrix::<N>::identity();
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..N {
            for q in (p + 1)..N {
                let alpha = col_norm_sqr(&a, p);
                let beta = col_norm_sqr(&a, q);
                let gamma = col_dot(&a, p, q);
                let g = gamma.norm();
                if g <= f64::MIN_POSITIVE || g <= 1e-15 * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phc = (gamma / g).conj();
                let zeta = (beta - alpha) / (2.0 * g);
                let t = if zeta >= 0.0 {
                    1.0 / (zeta + (1.0 + zeta * zeta).sqrt())
                } else {
                    -1.0 / (-zeta + (1.0 + zeta * zeta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                rotate(&mut a, p, q, c, s, phc);
                rotate(&mut v, p, q, c, s, phc);
            }
        }
        if !rotated {
            break;
        }
    }
    let norms: [f64; N] = std::array::from_fn(|k| col_norm_sqr(&a, k).sqrt());
    let mut order: [usize; N] = std::array::from_fn(|i| i);
    order.sort_by(|&x, &y| norms[y].total_cmp(&norms[x]));
    let s = order.map(|k| norms[k]);
    let smax = s[0];
    let mut u = Matrix::<N>::zeros();
    let mut have = [false; N];
    for (j, &k) in order.iter().enumerate() {
        if s[j] > 0.0 && s[j] > (N as f64) * f64::EPSILON * smax {
            for i in 0..N {
                u.0[i][j] = a.0[i][k] / s[j];
            }
            have[j] = true;
        }
    }
    complete_unitary(&mut u, &have);
    let v = Matrix::from_fn(|i, j| v.0[i][order[j]]);
    Svd { u, s, v }
}
