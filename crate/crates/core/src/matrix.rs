//! Dense square complex matrices and the Hermitian / unitary newtypes built on them.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};
#[allow(unused_imports)] // inherent float methods need std
use num_traits::Float;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Hermiticity residual above which construction fails instead of symmetrizing.
pub const HERMITIAN_TOL: f64 = 1e-8;
/// Largest accepted `‖U†U − 1‖_max` for a [`UnitaryOperator`].
pub const UNITARY_TOL: f64 = 1e-10;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Row-major `N × N` complex matrix with finite entries and `N ≥ 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if dim < 2 {
            return Err(Error::DimensionTooSmall(dim));
        }
        if data.len() != dim * dim {
            return Err(Error::EntryCount { expected: dim * dim, got: data.len() });
        }
        if let Some(k) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite { row: k / dim, col: k % dim });
        }
        Ok(Self { dim, data })
    }

    /// Builds a matrix from separate real and imaginary row-major parts.
    pub fn from_parts(re: &[Vec<f64>], im: &[Vec<f64>]) -> Result<Self> {
        let dim = re.len();
        if im.len() != dim {
            return Err(Error::DimensionMismatch { left: dim, right: im.len() });
        }
        let mut data = Vec::with_capacity(dim * dim);
        for (r, i) in re.iter().zip(im) {
            if r.len() != dim || i.len() != dim {
                return Err(Error::EntryCount { expected: dim, got: r.len().min(i.len()) });
            }
            data.extend(r.iter().zip(i).map(|(&a, &b)| Complex64::new(a, b)));
        }
        Self::new(dim, data)
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::EntryCount { expected: dim, got: row.len() });
            }
            data.extend(row.iter().map(|&x| Complex64::new(x, 0.0)));
        }
        Self::new(dim, data)
    }

    // Crate-internal constructor for shapes known to be valid.
    pub(crate) fn from_vec(dim: usize, data: Vec<Complex64>) -> Self {
        debug_assert_eq!(data.len(), dim * dim);
        Self { dim, data }
    }

    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![Complex64::new(0.0, 0.0); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for k in 0..dim {
            m.data[k * dim + k] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn diagonal(values: &[Complex64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (k, &v) in values.iter().enumerate() {
            m[(k, k)] = v;
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    /// Whether every entry is finite.
    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for r in 0..n {
            for c in 0..n {
                out.data[c * n + r] = self.data[r * n + c].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|k| self.data[k * self.dim + k]).sum()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::from_vec(self.dim, self.data.iter().map(|&z| z * s).collect())
    }

    pub fn scale_real(&self, s: f64) -> Self {
        Self::from_vec(self.dim, self.data.iter().map(|&z| z * s).collect())
    }

    /// `self + s·other`.
    pub fn add_scaled(&self, other: &Self, s: Complex64) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        Self::from_vec(self.dim, self.data.iter().zip(&other.data).map(|(&a, &b)| a + b * s).collect())
    }

    /// Largest entry magnitude, the norm used for every tolerance comparison.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Maximum absolute column sum.
    pub fn norm_one(&self) -> f64 {
        let n = self.dim;
        (0..n).map(|c| (0..n).map(|r| self.data[r * n + c].norm()).sum::<f64>()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.data.iter().zip(&other.data).fold(0.0, |m, (a, b)| m.max((a - b).norm()))
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let n = self.dim;
        let mut out = vec![Complex64::new(0.0, 0.0); n * n];
        for r in 0..n {
            let row = &self.data[r * n..(r + 1) * n];
            let dst = &mut out[r * n..(r + 1) * n];
            for (k, &a) in row.iter().enumerate() {
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let src = &other.data[k * n..(k + 1) * n];
                for (d, &b) in dst.iter_mut().zip(src) {
                    *d += a * b;
                }
            }
        }
        Self::from_vec(n, out)
    }

    /// `[self, other] = self·other − other·self`.
    pub fn commutator(&self, other: &Self) -> Self {
        &self.matmul(other) - &other.matmul(self)
    }

    /// Similarity transform `u · self · u†`.
    pub fn conjugate_by(&self, u: &Self) -> Self {
        u.matmul(self).matmul(&u.adjoint())
    }

    pub fn kron(&self, other: &Self) -> Self {
        let (a, b) = (self.dim, other.dim);
        let n = a * b;
        let mut out = Self::zeros(n);
        for i in 0..a {
            for j in 0..a {
                let x = self.data[i * a + j];
                if x.re == 0.0 && x.im == 0.0 {
                    continue;
                }
                for k in 0..b {
                    for l in 0..b {
                        out.data[(i * b + k) * n + (j * b + l)] = x * other.data[k * b + l];
                    }
                }
            }
        }
        out
    }

    /// `max |M − M†|` over entries.
    pub fn hermitian_residual(&self) -> f64 {
        let n = self.dim;
        let mut m: f64 = 0.0;
        for r in 0..n {
            for c in r..n {
                m = m.max((self.data[r * n + c] - self.data[c * n + r].conj()).norm());
            }
        }
        m
    }

    /// `max |M + M†|` over entries.
    pub fn anti_hermitian_residual(&self) -> f64 {
        let n = self.dim;
        let mut m: f64 = 0.0;
        for r in 0..n {
            for c in r..n {
                m = m.max((self.data[r * n + c] + self.data[c * n + r].conj()).norm());
            }
        }
        m
    }

    /// `‖M†M − 1‖_max`.
    pub fn unitarity_residual(&self) -> f64 {
        self.adjoint().matmul(self).max_abs_diff(&Self::identity(self.dim))
    }

    pub fn row_major(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.data.iter().copied()
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.data[r * self.dim + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.data[r * self.dim + c]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.add_scaled(rhs, Complex64::new(1.0, 0.0))
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.add_scaled(rhs, Complex64::new(-1.0, 0.0))
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs)
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        self.scale_real(-1.0)
    }
}

impl AddAssign<&ComplexMatrix> for ComplexMatrix {
    fn add_assign(&mut self, rhs: &ComplexMatrix) {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a += b;
        }
    }
}

/// A Hermitian matrix. Construction symmetrizes `(M + M†)/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    matrix: ComplexMatrix,
    residual: f64,
}

impl HermitianOperator {
    /// Symmetrizes `m`; fails when the discarded anti-Hermitian part exceeds
    /// [`HERMITIAN_TOL`] relative to the matrix scale.
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        let residual = m.hermitian_residual();
        if residual > HERMITIAN_TOL * m.max_abs().max(1.0) {
            return Err(Error::NotHermitian(residual));
        }
        Ok(Self { matrix: symmetrize(&m), residual })
    }

    pub(crate) fn from_matrix_unchecked(m: ComplexMatrix) -> Self {
        Self { matrix: symmetrize(&m), residual: 0.0 }
    }

    pub fn zeros(dim: usize) -> Self {
        Self { matrix: ComplexMatrix::zeros(dim), residual: 0.0 }
    }

    pub fn identity(dim: usize) -> Self {
        Self { matrix: ComplexMatrix::identity(dim), residual: 0.0 }
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        Self::new(ComplexMatrix::from_real_rows(rows)?)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// Anti-Hermitian part discarded at construction.
    pub fn residual(&self) -> f64 {
        self.residual
    }

    /// Real trace.
    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn is_traceless(&self, tol: f64) -> bool {
        self.matrix.trace().norm() <= tol
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { matrix: self.matrix.scale_real(s), residual: 0.0 }
    }

    /// `self + s·other`, still Hermitian for real `s`.
    pub fn add_scaled(&self, other: &Self, s: f64) -> Self {
        Self { matrix: self.matrix.add_scaled(&other.matrix, Complex64::new(s, 0.0)), residual: 0.0 }
    }

    /// `u · self · u†`.
    pub fn conjugate_by(&self, u: &UnitaryOperator) -> Self {
        Self::from_matrix_unchecked(self.matrix.conjugate_by(u.matrix()))
    }

    /// `exp(−i·self·t)`.
    pub fn evolution(&self, t: f64) -> Result<UnitaryOperator> {
        crate::linalg::exp_hermitian(self, Complex64::new(0.0, -t)).map(UnitaryOperator::from_matrix_unchecked)
    }

    /// `Tr(self²)`.
    pub fn trace_sq(&self) -> f64 {
        self.matrix.as_slice().iter().map(|z| z.norm_sqr()).sum()
    }
}

fn symmetrize(m: &ComplexMatrix) -> ComplexMatrix {
    let n = m.dim();
    let mut out = ComplexMatrix::zeros(n);
    for r in 0..n {
        out[(r, r)] = Complex64::new(m[(r, r)].re, 0.0);
        for c in r + 1..n {
            let v = (m[(r, c)] + m[(c, r)].conj()) * 0.5;
            out[(r, c)] = v;
            out[(c, r)] = v.conj();
        }
    }
    out
}

/// A unitary matrix, `‖U†U − 1‖_max ≤ 1e−10`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryOperator {
    matrix: ComplexMatrix,
}

impl UnitaryOperator {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        let residual = m.unitarity_residual();
        if residual > UNITARY_TOL {
            return Err(Error::NotUnitary(residual));
        }
        Ok(Self { matrix: m })
    }

    pub(crate) fn from_matrix_unchecked(m: ComplexMatrix) -> Self {
        Self { matrix: m }
    }

    pub fn identity(dim: usize) -> Self {
        Self { matrix: ComplexMatrix::identity(dim) }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn adjoint(&self) -> Self {
        Self { matrix: self.matrix.adjoint() }
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self { matrix: self.matrix.matmul(&other.matrix) }
    }

    /// `e^{iθ}·self`.
    pub fn with_phase(&self, theta: f64) -> Self {
        Self { matrix: self.matrix.scale(Complex64::from_polar(1.0, theta)) }
    }

    pub fn apply(&self, state: &[Complex64]) -> Vec<Complex64> {
        let n = self.dim();
        assert_eq!(state.len(), n, "dimension mismatch");
        (0..n).map(|r| (0..n).map(|c| self.matrix[(r, c)] * state[c]).sum()).collect()
    }
}

/// `−i·M`, the Schrödinger generator applied to `M`.
pub(crate) fn times_minus_i(m: &ComplexMatrix) -> ComplexMatrix {
    m.scale(-I)
}
