//! Fixed-size dense complex matrices and two-qubit state vectors.

use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

/// Square complex matrix stored row-major on the stack.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Matrix<const N: usize>(pub [[C64; N]; N]);

/// 2×2 local operator.
pub type Operator2 = Matrix<2>;
/// 4×4 operator on C²⊗C².
pub type Operator4 = Matrix<4>;

impl<const N: usize> Matrix<N> {
    pub const fn zeros() -> Self {
        Self([[ZERO; N]; N])
    }

    pub fn identity() -> Self {
        Self::from_fn(|i, j| if i == j { ONE } else { ZERO })
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                m.0[i][j] = f(i, j);
            }
        }
        m
    }

    pub fn from_real(rows: [[f64; N]; N]) -> Self {
        Self::from_fn(|i, j| C64::new(rows[i][j], 0.0))
    }

    pub fn diag(d: [C64; N]) -> Self {
        Self::from_fn(|i, j| if i == j { d[i] } else { ZERO })
    }

    pub fn real_diag(d: [f64; N]) -> Self {
        Self::from_fn(|i, j| if i == j { C64::new(d[i], 0.0) } else { ZERO })
    }

    /// Builds a matrix whose `j`-th column is `cols[j]`.
    pub fn from_cols(cols: [[C64; N]; N]) -> Self {
        Self::from_fn(|i, j| cols[j][i])
    }

    pub fn col(&self, j: usize) -> [C64; N] {
        std::array::from_fn(|i| self.0[i][j])
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(|i, j| self.0[j][i].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(|i, j| self.0[j][i])
    }

    pub fn conj(&self) -> Self {
        Self::from_fn(|i, j| self.0[i][j].conj())
    }

    pub fn trace(&self) -> C64 {
        (0..N).map(|i| self.0[i][i]).sum()
    }

    pub fn scale(&self, c: C64) -> Self {
        Self::from_fn(|i, j| self.0[i][j] * c)
    }

    pub fn scale_real(&self, c: f64) -> Self {
        Self::from_fn(|i, j| self.0[i][j] * c)
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise deviation `max |a_ij - b_ij|`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (*self - *other).max_abs()
    }

    /// `max |M - M†|`.
    pub fn hermitian_deviation(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    /// `max |M - Mᵀ|`.
    pub fn symmetric_deviation(&self) -> f64 {
        self.max_abs_diff(&self.transpose())
    }

    /// `(M + M†) / 2`.
    pub fn hermitian_part(&self) -> Self {
        (*self + self.adjoint()).scale_real(0.5)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn mul_vec(&self, v: &[C64; N]) -> [C64; N] {
        std::array::from_fn(|i| (0..N).map(|j| self.0[i][j] * v[j]).sum())
    }

    /// LU factorization with partial pivoting. Returns the packed factors,
    /// the row permutation and the permutation sign.
    fn lu(&self) -> ([[C64; N]; N], [usize; N], f64) {
        let mut a = self.0;
        let mut perm: [usize; N] = std::array::from_fn(|i| i);
        let mut sign = 1.0;
        for k in 0..N {
            let p = (k..N).max_by(|&x, &y| a[x][k].norm().total_cmp(&a[y][k].norm())).unwrap_or(k);
            if p != k {
                a.swap(p, k);
                perm.swap(p, k);
                sign = -sign;
            }
            let pivot = a[k][k];
            if pivot == ZERO {
                continue;
            }
            for i in (k + 1)..N {
                let f = a[i][k] / pivot;
                a[i][k] = f;
                for j in (k + 1)..N {
                    let t = a[k][j];
                    a[i][j] -= f * t;
                }
            }
        }
        (a, perm, sign)
    }

    /// Determinant as the signed product of the LU pivots.
    pub fn determinant(&self) -> C64 {
        let (lu, _, sign) = self.lu();
        (0..N).map(|i| lu[i][i]).product::<C64>() * sign
    }

    /// Inverse via LU; fails with `Singular` when `|det| <= 1e-12`.
    pub fn inverse(&self) -> Result<Self> {
        let det = self.determinant();
        if det.norm() <= 1e-12 {
            return Err(Error::Singular { det: det.norm() });
        }
        let (lu, perm, _) = self.lu();
        let mut inv = Self::zeros();
        for col in 0..N {
            // forward substitution on the permuted unit vector
            let mut y = [ZERO; N];
            for i in 0..N {
                let mut s = if perm[i] == col { ONE } else { ZERO };
                for k in 0..i {
                    s -= lu[i][k] * y[k];
                }
                y[i] = s;
            }
            let mut x = [ZERO; N];
            for i in (0..N).rev() {
                let mut s = y[i];
                for k in (i + 1)..N {
                    s -= lu[i][k] * x[k];
                }
                x[i] = s / lu[i][i];
            }
            for i in 0..N {
                inv.0[i][col] = x[i];
            }
        }
        Ok(inv)
    }
}

impl Matrix<2> {
    /// Kronecker product `self ⊗ other`; the left factor acts on the first qubit.
    pub fn kron(&self, other: &Matrix<2>) -> Matrix<4> {
        Matrix::from_fn(|r, c| self.0[r / 2][c / 2] * other.0[r % 2][c % 2])
    }

    /// Closed-form 2×2 determinant `ad - bc`.
    pub fn det2(&self) -> C64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }
}

impl<const N: usize> Default for Matrix<N> {
    fn default() -> Self {
        Self::zeros()
    }
}

impl<const N: usize> Index<(usize, usize)> for Matrix<N> {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.0[i][j]
    }
}

impl<const N: usize> IndexMut<(usize, usize)> for Matrix<N> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.0[i][j]
    }
}

impl<const N: usize> Add for Matrix<N> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| self.0[i][j] + rhs.0[i][j])
    }
}

impl<const N: usize> Sub for Matrix<N> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| self.0[i][j] - rhs.0[i][j])
    }
}

impl<const N: usize> Neg for Matrix<N> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::from_fn(|i, j| -self.0[i][j])
    }
}

impl<const N: usize> Mul for Matrix<N> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| (0..N).map(|k| self.0[i][k] * rhs.0[k][j]).sum())
    }
}

impl<const N: usize> Mul<C64> for Matrix<N> {
    type Output = Self;
    fn mul(self, rhs: C64) -> Self {
        self.scale(rhs)
    }
}

impl<const N: usize> Mul<f64> for Matrix<N> {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        self.scale_real(rhs)
    }
}

/// Pure two-qubit state, amplitudes ordered |00⟩, |01⟩, |10⟩, |11⟩.
/// Not necessarily unit norm.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StateVector(pub [C64; 4]);

impl StateVector {
    pub const fn new(amplitudes: [C64; 4]) -> Self {
        Self(amplitudes)
    }

    pub fn zero() -> Self {
        Self([ZERO; 4])
    }

    pub fn from_real(a: [f64; 4]) -> Self {
        Self(a.map(|x| C64::new(x, 0.0)))
    }

    /// Computational basis state `|k⟩`, `k` in 0..4.
    pub fn basis(k: usize) -> Self {
        let mut v = [ZERO; 4];
        v[k] = ONE;
        Self(v)
    }

    pub fn amplitudes(&self) -> &[C64; 4] {
        &self.0
    }

    pub fn conj(&self) -> Self {
        Self(self.0.map(|z| z.conj()))
    }

    pub fn scale(&self, c: C64) -> Self {
        Self(self.0.map(|z| z * c))
    }

    /// Hermitian inner product `⟨self|other⟩`.
    pub fn dot(&self, other: &Self) -> C64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (*self - *other).max_abs()
    }

    /// `|self⟩⟨other|`.
    pub fn outer(&self, other: &Self) -> Operator4 {
        Matrix::from_fn(|i, j| self.0[i] * other.0[j].conj())
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl Add for StateVector {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self(std::array::from_fn(|i| self.0[i] + rhs.0[i]))
    }
}

impl Sub for StateVector {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self(std::array::from_fn(|i| self.0[i] - rhs.0[i]))
    }
}

impl Neg for StateVector {
    type Output = Self;
    fn neg(self) -> Self {
        Self(self.0.map(|z| -z))
    }
}

impl Mul<StateVector> for Operator4 {
    type Output = StateVector;
    fn mul(self, rhs: StateVector) -> StateVector {
        StateVector(self.mul_vec(&rhs.0))
    }
}

impl Mul<StateVector> for &Operator4 {
    type Output = StateVector;
    fn mul(self, rhs: StateVector) -> StateVector {
        StateVector(self.mul_vec(&rhs.0))
    }
}
