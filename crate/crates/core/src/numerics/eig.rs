//! Cyclic Jacobi eigensolvers for small Hermitian and real symmetric matrices.

use super::matrix::{Matrix, C64, ZERO};
use crate::error::{Error, Result};
use crate::tolerance::STRUCTURAL;

const MAX_SWEEPS: usize = 64;

/// Eigen-decomposition of a Hermitian matrix: `M = V diag(values) V†`,
/// eigenvalues in descending order, eigenvectors stored as columns of `vectors`.
#[derive(Clone, Copy, Debug)]
pub struct HermitianEig<const N: usize> {
    pub values: [f64; N],
    pub vectors: Matrix<N>,
}

impl<const N: usize> HermitianEig<N> {
    pub fn vector(&self, k: usize) -> [C64; N] {
        self.vectors.col(k)
    }

    /// `Σ λ_k v_k v_k†`.
    pub fn reconstruct(&self) -> Matrix<N> {
        let d = Matrix::<N>::from_fn(|i, j| if i == j { C64::new(self.values[i], 0.0) } else { ZERO });
        self.vectors * d * self.vectors.adjoint()
    }
}

impl HermitianEig<4> {
    pub fn state(&self, k: usize) -> super::StateVector {
        super::StateVector(self.vectors.col(k))
    }
}

/// Solves the 2×2 Hermitian sub-problem at `(p, q)`: returns `(c, s, phase)`
/// for the rotation `[[c, s], [-s·phase̅, c·phase̅]]` that annihilates `a_pq`.
fn jacobi_rotation(app: f64, aqq: f64, apq: C64) -> (f64, f64, C64) {
    let b = apq.norm();
    let phase = apq / b;
    let zeta = (aqq - app) / (2.0 * b);
    let t = if zeta >= 0.0 {
        1.0 / (zeta + (1.0 + zeta * zeta).sqrt())
    } else {
        -1.0 / (-zeta + (1.0 + zeta * zeta).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    (c, t * c, phase)
}

/// Right-multiplies columns `p`, `q` of `m` by the rotation.
fn rotate_cols<const N: usize>(m: &mut Matrix<N>, p: usize, q: usize, c: f64, s: f64, ph: C64) {
    let phc = ph.conj();
    for k in 0..N {
        let (mp, mq) = (m.0[k][p], m.0[k][q]);
        m.0[k][p] = mp * c - mq * phc * s;
        m.0[k][q] = mp * s + mq * phc * c;
    }
}

/// Left-multiplies rows `p`, `q` of `m` by the adjoint rotation.
fn rotate_rows_adjoint<const N: usize>(m: &mut Matrix<N>, p: usize, q: usize, c: f64, s: f64, ph: C64) {
    for k in 0..N {
        let (mp, mq) = (m.0[p][k], m.0[q][k]);
        m.0[p][k] = mp * c - mq * ph * s;
        m.0[q][k] = mp * s + mq * ph * c;
    }
}

fn off_diagonal_sqr<const N: usize>(a: &Matrix<N>) -> f64 {
    let mut s = 0.0;
    for i in 0..N {
        for j in 0..N {
            if i != j {
                s += a.0[i][j].norm_sqr();
            }
        }
    }
    s
}

fn sort_descending<const N: usize>(values: [f64; N], vectors: &Matrix<N>) -> ([f64; N], Matrix<N>) {
    let mut order: [usize; N] = std::array::from_fn(|i| i);
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
    let sorted = order.map(|k| values[k]);
    let vecs = Matrix::from_fn(|i, j| vectors.0[i][order[j]]);
    (sorted, vecs)
}

/// Hermitian eigen-decomposition by cyclic complex Jacobi rotations.
///
/// Fails with [`Error::NotHermitian`] when `max |M - M†| > 1e-10`.
pub fn hermitian_eig<const N: usize>(m: &Matrix<N>) -> Result<HermitianEig<N>> {
    let deviation = m.hermitian_deviation();
    if !(deviation <= STRUCTURAL) || !m.is_finite() {
        return Err(Error::NotHermitian { deviation });
    }
    let mut a = m.hermitian_part();
    let mut v = Matrix::<N>::identity();
    let scale = a.frobenius_norm();
    if scale == 0.0 {
        return Ok(HermitianEig { values: [0.0; N], vectors: v });
    }
    let stop = (1e-17 * scale).powi(2);
    for _ in 0..MAX_SWEEPS {
        if off_diagonal_sqr(&a) <= stop {
            break;
        }
        for p in 0..N {
            for q in (p + 1)..N {
                let apq = a.0[p][q];
                if apq.norm() <= f64::MIN_POSITIVE {
                    continue;
                }
                let (c, s, ph) = jacobi_rotation(a.0[p][p].re, a.0[q][q].re, apq);
                rotate_cols(&mut a, p, q, c, s, ph);
                rotate_rows_adjoint(&mut a, p, q, c, s, ph);
                a.0[p][q] = ZERO;
                a.0[q][p] = ZERO;
                a.0[p][p].im = 0.0;
                a.0[q][q].im = 0.0;
                rotate_cols(&mut v, p, q, c, s, ph);
            }
        }
    }
    let values: [f64; N] = std::array::from_fn(|i| a.0[i][i].re);
    let (values, vectors) = sort_descending(values, &v);
    Ok(HermitianEig { values, vectors })
}

/// Real symmetric eigen-decomposition, descending eigenvalues, eigenvectors as
/// columns (`vectors[i][k]` is component `i` of eigenvector `k`).
pub(crate) fn symmetric_eig_real<const N: usize>(m: &[[f64; N]; N]) -> ([f64; N], [[f64; N]; N]) {
    let mut a = *m;
    for i in 0..N {
        for j in (i + 1)..N {
            let avg = 0.5 * (a[i][j] + a[j][i]);
            a[i][j] = avg;
            a[j][i] = avg;
        }
    }
    let mut v = [[0.0; N]; N];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    let scale: f64 = a.iter().flatten().map(|x| x * x).sum::<f64>().sqrt();
    if scale == 0.0 {
        return ([0.0; N], v);
    }
    let stop = (1e-17 * scale).powi(2);
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..N)
            .flat_map(|i| (0..N).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off <= stop {
            break;
        }
        for p in 0..N {
            for q in (p + 1)..N {
                let apq = a[p][q];
                if apq.abs() <= f64::MIN_POSITIVE {
                    continue;
                }
                let zeta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = if zeta >= 0.0 {
                    1.0 / (zeta + (1.0 + zeta * zeta).sqrt())
                } else {
                    -1.0 / (-zeta + (1.0 + zeta * zeta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..N {
                    let (kp, kq) = (a[k][p], a[k][q]);
                    a[k][p] = c * kp - s * kq;
                    a[k][q] = s * kp + c * kq;
                }
                for k in 0..N {
                    let (pk, qk) = (a[p][k], a[q][k]);
                    a[p][k] = c * pk - s * qk;
                    a[q][k] = s * pk + c * qk;
                }
                a[p][q] = 0.0;
                a[q][p] = 0.0;
                for row in v.iter_mut() {
                    let (kp, kq) = (row[p], row[q]);
                    row[p] = c * kp - s * kq;
                    row[q] = s * kp + c * kq;
                }
            }
        }
    }
    let mut order: [usize; N] = std::array::from_fn(|i| i);
    order.sort_by(|&x, &y| a[y][y].total_cmp(&a[x][x]));
    let values = order.map(|k| a[k][k]);
    let vectors: [[f64; N]; N] = std::array::from_fn(|i| order.map(|k| v[i][k]));
    (values, vectors)
}
