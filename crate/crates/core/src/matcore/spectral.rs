//! Spectral decompositions of Hermitian and unitary matrices.
//!
//! Hermitian input goes through `nalgebra`'s symmetric (Hermitian) eigensolver.
//! Unitary input goes through a complex Schur decomposition: for a normal
//! matrix the triangular factor is diagonal up to rounding, so the Schur
//! vectors are an orthonormal eigenbasis even inside degenerate or clustered
//! eigenspaces, where diagonalizing `(O + O†)/2` alone would mix phases `±θ`.

use alloc::vec::Vec;

use nalgebra::{DMatrix, Schur, SymmetricEigen};
use num_complex::Complex64;

use super::{ComplexSquareMatrix, I};
use crate::{Error, Result, Tolerances};

const MAX_SWEEPS: usize = 100_000;

/// Eigen-decomposition `A = V·diag(λ)·V†` with unitary `V`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    /// Real for Hermitian input, unit modulus for unitary input.
    pub eigenvalues: Vec<Complex64>,
    /// Columns are the eigenvectors.
    pub eigenvectors: ComplexSquareMatrix,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `V·diag(f(λ))·V†`.
    pub fn map(&self, mut f: impl FnMut(Complex64) -> Complex64) -> ComplexSquareMatrix {
        let values: Vec<Complex64> = self.eigenvalues.iter().map(|&z| f(z)).collect();
        self.assemble(&values)
    }

    /// `V·diag(values)·V†` for arbitrary diagonal values.
    pub fn assemble(&self, values: &[Complex64]) -> ComplexSquareMatrix {
        let v = self.eigenvectors.as_matrix();
        let n = self.dim();
        let mut scaled = v.clone();
        for (j, &d) in values.iter().enumerate() {
            for i in 0..n {
                scaled[(i, j)] *= d;
            }
        }
        ComplexSquareMatrix::wrap(scaled * v.adjoint())
    }

    pub fn reconstruct(&self) -> ComplexSquareMatrix {
        self.map(|z| z)
    }

    /// Real parts of the eigenvalues (the energies, for Hermitian input).
    pub fn real_eigenvalues(&self) -> Vec<f64> {
        self.eigenvalues.iter().map(|z| z.re).collect()
    }

    /// Component of column `n` along basis vector `i`.
    pub fn vector_component(&self, i: usize, n: usize) -> Complex64 {
        self.eigenvectors.get(i, n)
    }
}

/// Hermitian eigen-decomposition, eigenvalues ascending.
pub fn spectral_hermitian(h: &ComplexSquareMatrix, tol: &Tolerances) -> Result<SpectralDecomposition> {
    h.require_hermitian(tol.spec)?;
    let sym = h.hermitian_part();
    let eig = SymmetricEigen::try_new(sym.into_matrix(), f64::EPSILON, MAX_SWEEPS)
        .ok_or(Error::NoConvergence)?;
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    Ok(reorder(
        order.iter().map(|&k| Complex64::new(eig.eigenvalues[k], 0.0)).collect(),
        &eig.eigenvectors,
        &order,
    ))
}

/// Unitary eigen-decomposition, eigenvalues normalized to the unit circle and
/// ordered by ascending phase in (−π, π].
pub fn spectral_unitary(o: &ComplexSquareMatrix, tol: &Tolerances) -> Result<SpectralDecomposition> {
    let defect = o.unitarity_defect();
    if defect > tol.spec {
        return Err(Error::NotUnitary(defect));
    }
    let schur = Schur::try_new(o.as_matrix().clone(), f64::EPSILON, MAX_SWEEPS)
        .ok_or(Error::NoConvergence)?;
    let (q, t) = schur.unpack();
    let n = o.dim();
    let raw: Vec<Complex64> = (0..n)
        .map(|k| {
            let z = t[(k, k)];
            z / z.norm()
        })
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| raw[a].arg().total_cmp(&raw[b].arg()));
    Ok(reorder(order.iter().map(|&k| raw[k]).collect(), &q, &order))
}

fn reorder(values: Vec<Complex64>, vectors: &DMatrix<Complex64>, order: &[usize]) -> SpectralDecomposition {
    let n = order.len();
    let v = DMatrix::from_fn(n, n, |i, j| vectors[(i, order[j])]);
    SpectralDecomposition {
        eigenvalues: values,
        eigenvectors: ComplexSquareMatrix::wrap(v),
    }
}

/// `exp(−i·t·H)` for Hermitian `H`, through its spectral decomposition.
pub fn expm_hermitian_generator(
    h: &ComplexSquareMatrix,
    t: f64,
    tol: &Tolerances,
) -> Result<ComplexSquareMatrix> {
    let spec = spectral_hermitian(h, tol)?;
    Ok(exp_from_spectrum(&spec, t))
}

pub(crate) fn exp_from_spectrum(spec: &SpectralDecomposition, t: f64) -> ComplexSquareMatrix {
    spec.map(|e| (-I * e.re * t).exp())
}

#[cfg(test)]
mod tests {
    use super::super::test_util::*;
    use super::*;
    use core::f64::consts::PI;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn exp_sigma_y_quarter_turn() {
        let u = expm_hermitian_generator(&sigma_y(), PI / 2.0, &tol()).unwrap();
        let expected =
            ComplexSquareMatrix::from_rows(&[[c(0., 0.), c(-1., 0.)], [c(1., 0.), c(0., 0.)]]).unwrap();
        assert!(u.distance(&expected) < 1e-14);
    }

    #[test]
    fn exp_at_zero_is_identity() {
        let h = ComplexSquareMatrix::from_rows(&[[c(0.3, 0.), c(1., -2.)], [c(1., 2.), c(-0.3, 0.)]]).unwrap();
        let u = expm_hermitian_generator(&h, 0.0, &tol()).unwrap();
        assert!(u.distance(&ComplexSquareMatrix::identity(2)) < 1e-15);
    }

    #[test]
    fn exp_diagonal() {
        let t = 0.731;
        let u = expm_hermitian_generator(&sigma_z(), t, &tol()).unwrap();
        let expected = ComplexSquareMatrix::from_diagonal(&[(-I * t).exp(), (I * t).exp()]);
        assert!(u.distance(&expected) < 1e-15);
    }

    #[test]
    fn exp_rejects_non_hermitian() {
        let m = ComplexSquareMatrix::from_rows(&[[c(0., 0.), c(1., 0.)], [c(0., 0.), c(0., 0.)]]).unwrap();
        assert!(matches!(
            expm_hermitian_generator(&m, 1.0, &tol()),
            Err(Error::NotHermitian(_))
        ));
    }

    #[test]
    fn unitary_spectrum_of_quarter_turn() {
        // eigenvalues ±i; (O + O†)/2 = 0 is fully degenerate here
        let o = ComplexSquareMatrix::from_rows(&[[c(0., 0.), c(-1., 0.)], [c(1., 0.), c(0., 0.)]]).unwrap();
        let s = spectral_unitary(&o, &tol()).unwrap();
        assert!((s.eigenvalues[0] - c(0., -1.)).norm() < 1e-14);
        assert!((s.eigenvalues[1] - c(0., 1.)).norm() < 1e-14);
        assert!(s.reconstruct().distance(&o) < 1e-13);
        assert!(s.eigenvectors.unitarity_defect() < 1e-13);
    }

    #[test]
    fn unitary_rejects_non_unitary() {
        let m = ComplexSquareMatrix::from_rows(&[[c(2., 0.), c(0., 0.)], [c(0., 0.), c(0.5, 0.)]]).unwrap();
        assert!(matches!(spectral_unitary(&m, &tol()), Err(Error::NotUnitary(_))));
    }

    #[test]
    fn hermitian_spectrum_sorted_and_reconstructs() {
        let h = &sigma_x().scale_real(2.0) + &sigma_z();
        let s = spectral_hermitian(&h, &tol()).unwrap();
        let e = s.real_eigenvalues();
        assert!(e[0] < e[1]);
        assert!((e[1] - 5f64.sqrt()).abs() < 1e-14);
        assert!(s.reconstruct().distance(&h) < 1e-13);
    }
}
