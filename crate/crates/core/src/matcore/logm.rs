//! Traceless logarithms of special-unitary matrices.
//!
//! For `O = V·diag(e^{iθ_n})·V†` every logarithm built on this eigenbasis is
//! `V·diag(i(θ_n + 2πk_n))·V†`. Keeping it in su(N) means `Σ(θ_n + 2πk_n) = 0`.
//! The principal phases `θ_n ∈ (−π, π]` of a determinant-one matrix sum to
//! `2πm`; the default branch undoes that by moving `m` phases across the cut.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

use num_complex::Complex64;

use super::spectral::{spectral_unitary, SpectralDecomposition};
use super::ComplexSquareMatrix;
use crate::{Error, Result, Tolerances};

const MAX_BRANCH_CANDIDATES: usize = 2_000_000;
const DEDUP_TOL: f64 = 1e-8;

/// A traceless anti-Hermitian logarithm of a special-unitary matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct LogBranch {
    pub matrix: ComplexSquareMatrix,
    /// Shift of each eigenphase, in units of 2π, relative to its principal
    /// value in (−π, π]. Indexed like [`LogBranch::eigenphases`].
    pub branch_offsets: Vec<i64>,
    /// Eigenphases of `matrix / i`, ascending by principal phase.
    pub eigenphases: Vec<f64>,
    /// `Σ eigenphases`; zero up to rounding.
    pub phase_sum_check: f64,
    /// Some principal eigenphase lies within the branch tolerance of ±π, so the
    /// choice of branch there is numerically ambiguous.
    pub near_branch_cut: bool,
}

impl LogBranch {
    /// `Tr(L²)`, real and ≤ 0 for anti-Hermitian `L`.
    pub fn trace_square(&self) -> f64 {
        super::trace_product(&self.matrix, &self.matrix).re
    }

    pub fn is_zero(&self) -> bool {
        self.eigenphases.iter().all(|&p| p == 0.0) || self.matrix.frobenius_norm() == 0.0
    }

    /// The reversed logarithm `−L`, a logarithm of `O†`.
    pub fn reversed(&self) -> LogBranch {
        LogBranch {
            matrix: -&self.matrix,
            branch_offsets: self.branch_offsets.iter().map(|k| -k).collect(),
            eigenphases: self.eigenphases.iter().map(|p| -p).collect(),
            phase_sum_check: -self.phase_sum_check,
            near_branch_cut: self.near_branch_cut,
        }
    }
}

struct PrincipalData {
    spec: SpectralDecomposition,
    phases: Vec<f64>,
    offsets: Vec<i64>,
    near_cut: bool,
}

fn principal_data(o: &ComplexSquareMatrix, tol: &Tolerances) -> Result<PrincipalData> {
    let spec = spectral_unitary(o, tol)?;
    let det: Complex64 = spec.eigenvalues.iter().product();
    let det_defect = (det - Complex64::new(1.0, 0.0)).norm();
    if det_defect > tol.spec {
        return Err(Error::NotSpecial(det_defect));
    }
    let phases: Vec<f64> = spec.eigenvalues.iter().map(|z| z.arg()).collect();
    let near_cut = phases.iter().any(|&p| PI - p.abs() <= tol.branch);

    let n = phases.len();
    let m = libm::round(phases.iter().sum::<f64>() / TAU) as i64;
    let mut offsets = vec![0i64; n];
    let mut idx: Vec<usize> = (0..n).collect();
    if m > 0 {
        idx.sort_by(|&a, &b| phases[b].total_cmp(&phases[a]).then(a.cmp(&b)));
        for &k in idx.iter().take(m as usize) {
            offsets[k] = -1;
        }
    } else if m < 0 {
        idx.sort_by(|&a, &b| phases[a].total_cmp(&phases[b]).then(a.cmp(&b)));
        for &k in idx.iter().take((-m) as usize) {
            offsets[k] = 1;
        }
    }
    Ok(PrincipalData {
        spec,
        phases,
        offsets,
        near_cut,
    })
}

fn build_branch(data: &PrincipalData, offsets: Vec<i64>) -> LogBranch {
    let eigenphases: Vec<f64> = data
        .phases
        .iter()
        .zip(&offsets)
        .map(|(&p, &k)| p + TAU * k as f64)
        .collect();
    let values: Vec<Complex64> = eigenphases.iter().map(|&p| Complex64::new(0.0, p)).collect();
    let matrix = data
        .spec
        .assemble(&values)
        .anti_hermitian_part()
        .traceless_part();
    LogBranch {
        matrix,
        phase_sum_check: eigenphases.iter().sum(),
        branch_offsets: offsets,
        eigenphases,
        near_branch_cut: data.near_cut,
    }
}

/// Principal traceless logarithm of a special-unitary matrix.
///
/// Eigenphases start in (−π, π]; if they sum to `2πm ≠ 0`, the `|m|` phases
/// closest to the cut (largest for `m > 0`, smallest for `m < 0`, ties by
/// index) are shifted by `∓2π`.
pub fn logm_special_unitary(o: &ComplexSquareMatrix, tol: &Tolerances) -> Result<LogBranch> {
    let data = principal_data(o, tol)?;
    let offsets = data.offsets.clone();
    Ok(build_branch(&data, offsets))
}

/// All traceless logarithms reachable from the principal branch by shifting
/// each eigenphase by `2πk_n`, `|k_n| ≤ max_shift`, `Σk_n = 0`.
///
/// The principal branch comes first; duplicates (same matrix to 1e−8) are
/// dropped.
pub fn enumerate_log_branches(
    o: &ComplexSquareMatrix,
    max_shift: u32,
    tol: &Tolerances,
) -> Result<Vec<LogBranch>> {
    let data = principal_data(o, tol)?;
    let n = data.phases.len();
    let width = 2 * max_shift as usize + 1;
    let total = (0..n).try_fold(1usize, |acc, _| acc.checked_mul(width));
    match total {
        Some(t) if t <= MAX_BRANCH_CANDIDATES => {}
        Some(t) => return Err(Error::TooManyBranches(t)),
        None => return Err(Error::TooManyBranches(usize::MAX)),
    }

    let s = max_shift as i64;
    let mut out: Vec<LogBranch> = vec![build_branch(&data, data.offsets.clone())];
    let mut shift = vec![-s; n];
    loop {
        if shift.iter().sum::<i64>() == 0 && shift.iter().any(|&k| k != 0) {
            let offsets: Vec<i64> = data.offsets.iter().zip(&shift).map(|(a, b)| a + b).collect();
            let cand = build_branch(&data, offsets);
            if out.iter().all(|b| b.matrix.distance(&cand.matrix) > DEDUP_TOL) {
                out.push(cand);
            }
        }
        // odometer increment
        let mut pos = 0;
        loop {
            if pos == n {
                return Ok(out);
            }
            if shift[pos] < s {
                shift[pos] += 1;
                break;
            }
            shift[pos] = -s;
            pos += 1;
        }
    }
}
