//! Dense complex matrix kernel.
//!
//! Everything in the crate is carried by [`ComplexSquareMatrix`]: Hamiltonians,
//! propagators, target gates and their logarithms. Small dimensions (N ≤ a few
//! hundred) are the only target, so storage is a plain dense column-major
//! `nalgebra` matrix.

mod logm;
mod spectral;

use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::{Error, Result};

pub use logm::{enumerate_log_branches, logm_special_unitary, LogBranch};
pub use spectral::{
    expm_hermitian_generator, spectral_hermitian, spectral_unitary, SpectralDecomposition,
};
pub(crate) use spectral::exp_from_spectrum;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub(crate) const I: Complex64 = Complex64::new(0.0, 1.0);

/// Dense N×N complex matrix, N ≥ 1.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexSquareMatrix(DMatrix<Complex64>);

impl ComplexSquareMatrix {
    /// Builds a matrix from row-major entries.
    pub fn from_row_major(dim: usize, entries: &[Complex64]) -> Result<Self> {
        if dim == 0 {
            return Err(Error::EmptyMatrix);
        }
        if entries.len() != dim * dim {
            return Err(Error::BadShape {
                expected: dim * dim,
                got: entries.len(),
            });
        }
        Ok(Self(DMatrix::from_row_slice(dim, dim, entries)))
    }

    /// Builds a matrix from nested rows; every row must have `rows.len()` entries.
    pub fn from_rows<R: AsRef<[Complex64]>>(rows: &[R]) -> Result<Self> {
        let dim = rows.len();
        let mut flat = Vec::with_capacity(dim * dim);
        for row in rows {
            let row = row.as_ref();
            if row.len() != dim {
                return Err(Error::BadShape {
                    expected: dim * dim,
                    got: dim * row.len(),
                });
            }
            flat.extend_from_slice(row);
        }
        Self::from_row_major(dim, &flat)
    }

    /// Wraps an `nalgebra` matrix, checking that it is square and nonempty.
    pub fn from_matrix(m: DMatrix<Complex64>) -> Result<Self> {
        if m.nrows() == 0 {
            return Err(Error::EmptyMatrix);
        }
        if m.nrows() != m.ncols() {
            return Err(Error::BadShape {
                expected: m.nrows() * m.nrows(),
                got: m.nrows() * m.ncols(),
            });
        }
        Ok(Self(m))
    }

    pub(crate) fn wrap(m: DMatrix<Complex64>) -> Self {
        debug_assert!(m.is_square() && m.nrows() > 0);
        Self(m)
    }

    pub fn zeros(dim: usize) -> Self {
        Self(DMatrix::zeros(dim, dim))
    }

    pub fn identity(dim: usize) -> Self {
        Self(DMatrix::identity(dim, dim))
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> Complex64) -> Self {
        Self(DMatrix::from_fn(dim, dim, f))
    }

    /// Diagonal matrix with the given entries.
    pub fn from_diagonal(diag: &[Complex64]) -> Self {
        let n = diag.len();
        Self::from_fn(n, |i, j| if i == j { diag[i] } else { ZERO })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.0[(row, col)]
    }

    pub fn as_matrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.0
    }

    /// Entries in row-major order.
    pub fn to_row_major(&self) -> Vec<Complex64> {
        let n = self.dim();
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                out.push(self.0[(i, j)]);
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self(&self.0 * c)
    }

    pub fn scale_real(&self, c: f64) -> Self {
        self.scale(Complex64::new(c, 0.0))
    }

    /// Frobenius norm `sqrt(Σ|a_ij|²)`.
    pub fn frobenius_norm(&self) -> f64 {
        libm::sqrt(self.0.iter().map(|z| z.norm_sqr()).sum::<f64>())
    }

    /// Frobenius distance `‖self − other‖_F`.
    pub fn distance(&self, other: &Self) -> f64 {
        self.check_dim(other).map(|_| ()).expect("dimension mismatch");
        libm::sqrt(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| (a - b).norm_sqr())
                .sum::<f64>(),
        )
    }

    /// `‖A − A†‖_F`.
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.dim();
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                acc += (self.0[(i, j)] - self.0[(j, i)].conj()).norm_sqr();
            }
        }
        libm::sqrt(acc)
    }

    /// `‖A + A†‖_F`.
    pub fn anti_hermitian_defect(&self) -> f64 {
        let n = self.dim();
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                acc += (self.0[(i, j)] + self.0[(j, i)].conj()).norm_sqr();
            }
        }
        libm::sqrt(acc)
    }

    /// `‖U†U − I‖_F`.
    pub fn unitarity_defect(&self) -> f64 {
        let g = self.0.adjoint() * &self.0;
        Self(g).distance(&Self::identity(self.dim()))
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_defect() <= tol
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_defect() <= tol
    }

    /// `(A + A†)/2`.
    pub fn hermitian_part(&self) -> Self {
        Self((&self.0 + self.0.adjoint()) * Complex64::new(0.5, 0.0))
    }

    /// `(A − A†)/2`.
    pub fn anti_hermitian_part(&self) -> Self {
        Self((&self.0 - self.0.adjoint()) * Complex64::new(0.5, 0.0))
    }

    /// Removes the trace: `A − (Tr A / N)·I`.
    pub fn traceless_part(&self) -> Self {
        let n = self.dim();
        let shift = self.trace() / n as f64;
        let mut m = self.0.clone();
        for i in 0..n {
            m[(i, i)] -= shift;
        }
        Self(m)
    }

    pub fn determinant(&self) -> Complex64 {
        self.0.clone().determinant()
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        Self(self.0.kronecker(&other.0))
    }

    /// Matrix–vector product.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let n = self.dim();
        assert_eq!(v.len(), n, "vector length must match matrix dimension");
        (0..n)
            .map(|i| (0..n).map(|j| self.0[(i, j)] * v[j]).sum())
            .collect()
    }

    pub(crate) fn check_dim(&self, other: &Self) -> Result<usize> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(self.dim(), other.dim()));
        }
        Ok(self.dim())
    }

    pub(crate) fn require_hermitian(&self, tol: f64) -> Result<()> {
        let defect = self.hermitian_defect();
        if defect > tol {
            return Err(Error::NotHermitian(defect));
        }
        Ok(())
    }
}

impl Add for &ComplexSquareMatrix {
    type Output = ComplexSquareMatrix;
    fn add(self, rhs: Self) -> ComplexSquareMatrix {
        ComplexSquareMatrix(&self.0 + &rhs.0)
    }
}

impl Sub for &ComplexSquareMatrix {
    type Output = ComplexSquareMatrix;
    fn sub(self, rhs: Self) -> ComplexSquareMatrix {
        ComplexSquareMatrix(&self.0 - &rhs.0)
    }
}

impl Mul for &ComplexSquareMatrix {
    type Output = ComplexSquareMatrix;
    fn mul(self, rhs: Self) -> ComplexSquareMatrix {
        ComplexSquareMatrix(&self.0 * &rhs.0)
    }
}

impl Neg for &ComplexSquareMatrix {
    type Output = ComplexSquareMatrix;
    fn neg(self) -> ComplexSquareMatrix {
        ComplexSquareMatrix(-&self.0)
    }
}

/// Hilbert–Schmidt inner product `Tr(A†B)`.
pub fn hilbert_schmidt(a: &ComplexSquareMatrix, b: &ComplexSquareMatrix) -> Result<Complex64> {
    let n = a.check_dim(b)?;
    let mut acc = ZERO;
    for i in 0..n {
        for j in 0..n {
            acc += a.0[(j, i)].conj() * b.0[(j, i)];
        }
    }
    Ok(acc)
}

/// `Tr(AB)` without forming the product.
pub fn trace_product(a: &ComplexSquareMatrix, b: &ComplexSquareMatrix) -> Complex64 {
    let n = a.dim();
    let mut acc = ZERO;
    for i in 0..n {
        for j in 0..n {
            acc += a.0[(i, j)] * b.0[(j, i)];
        }
    }
    acc
}
