//! Drift and control Hamiltonians.
//!
//! A [`ControlProblem`] is the navigation data: a traceless Hermitian drift
//! `H0` (the wind) and a control budget `Tr(Hc²) = 1/α`. The navigation
//! picture only applies while the budget strictly dominates the drift,
//! `α·Tr(H0²) < 1`.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

use crate::matcore::{spectral_hermitian, trace_product, ComplexSquareMatrix, I, ONE, ZERO};
use crate::{Error, Result, Tolerances};

/// Weighted tensor product of single-qubit Paulis, e.g. `("XX", 1.0)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliString {
    pub letters: String,
    pub coeff: f64,
}

impl PauliString {
    pub fn new(letters: impl Into<String>, coeff: f64) -> Self {
        Self {
            letters: letters.into(),
            coeff,
        }
    }

    pub fn qubits(&self) -> usize {
        self.letters.chars().count()
    }

    /// The unweighted tensor product.
    pub fn operator(&self) -> Result<ComplexSquareMatrix> {
        let mut chars = self.letters.chars();
        let first = chars.next().ok_or_else(|| Error::BadPauli(self.letters.clone()))?;
        let mut acc = pauli(first).ok_or_else(|| Error::BadPauli(self.letters.clone()))?;
        for ch in chars {
            let p = pauli(ch).ok_or_else(|| Error::BadPauli(self.letters.clone()))?;
            acc = acc.kron(&p);
        }
        Ok(acc)
    }
}

fn pauli(letter: char) -> Option<ComplexSquareMatrix> {
    let rows = match letter {
        'I' => [[ONE, ZERO], [ZERO, ONE]],
        'X' => [[ZERO, ONE], [ONE, ZERO]],
        'Y' => [[ZERO, -I], [I, ZERO]],
        'Z' => [[ONE, ZERO], [ZERO, -ONE]],
        _ => return None,
    };
    ComplexSquareMatrix::from_rows(&rows).ok()
}

/// `Σ coeff·(P₁ ⊗ … ⊗ P_q)` over the given strings. All strings must share
/// one length `q`; the result is `2^q × 2^q`.
pub fn build_pauli(strings: &[PauliString]) -> Result<ComplexSquareMatrix> {
    let first = strings.first().ok_or(Error::EmptyPauliList)?;
    let q = first.qubits();
    if strings.iter().any(|s| s.qubits() != q) {
        return Err(Error::MixedPauliLengths);
    }
    let mut acc = ComplexSquareMatrix::zeros(1usize << q);
    for s in strings {
        acc = &acc + &s.operator()?.scale_real(s.coeff);
    }
    Ok(acc)
}

/// A named failure of the [`ControlProblem`] invariants.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    NotHermitian { defect: f64 },
    NotTraceless { trace: Complex64 },
    NonPositiveBudget { budget: f64 },
    /// `Tr(H0²) ≥ budget`: the drift is at least as strong as the control.
    SmallWindViolated { tr_h0_sq: f64, budget: f64 },
    /// A control does not saturate the budget.
    BudgetMismatch { tr_hc_sq: f64, budget: f64 },
    DimensionMismatch { expected: usize, got: usize },
}

impl Violation {
    pub fn name(&self) -> &'static str {
        match self {
            Violation::NotHermitian { .. } => "not_hermitian",
            Violation::NotTraceless { .. } => "not_traceless",
            Violation::NonPositiveBudget { .. } => "nonpositive_budget",
            Violation::SmallWindViolated { .. } => "small_wind_violated",
            Violation::BudgetMismatch { .. } => "budget_mismatch",
            Violation::DimensionMismatch { .. } => "dimension_mismatch",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotHermitian { defect } => write!(f, "not_hermitian: ‖H − H†‖_F = {defect:e}"),
            Violation::NotTraceless { trace } => {
                write!(f, "not_traceless: Tr = {}{:+}i", trace.re, trace.im)
            }
            Violation::NonPositiveBudget { budget } => write!(f, "nonpositive_budget: {budget}"),
            Violation::SmallWindViolated { tr_h0_sq, budget } => write!(
                f,
                "small_wind_violated: Tr(H0²) = {tr_h0_sq} is not below budget {budget}"
            ),
            Violation::BudgetMismatch { tr_hc_sq, budget } => {
                write!(f, "budget_mismatch: Tr(Hc²) = {tr_hc_sq}, budget {budget}")
            }
            Violation::DimensionMismatch { expected, got } => {
                write!(f, "dimension_mismatch: expected {expected}, got {got}")
            }
        }
    }
}

/// Drift Hamiltonian plus control budget `Tr(Hc²) = budget = 1/α`.
#[derive(Debug, Clone, PartialEq)]
pub struct ControlProblem {
    h0: ComplexSquareMatrix,
    budget: f64,
    projected_trace: Option<Complex64>,
}

impl ControlProblem {
    pub fn new(h0: ComplexSquareMatrix, budget: f64) -> Self {
        Self::with_tolerances(h0, budget, &Tolerances::default())
    }

    /// Like [`ControlProblem::new`] with the budget given as `α = 1/budget`.
    pub fn from_alpha(h0: ComplexSquareMatrix, alpha: f64) -> Self {
        Self::new(h0, 1.0 / alpha)
    }

    /// A drift whose trace is nonzero but within `tol.spec` is projected onto
    /// its traceless part; the removed trace is kept in
    /// [`ControlProblem::projected_trace`]. Larger traces are left in place for
    /// [`validate`] to report.
    pub fn with_tolerances(h0: ComplexSquareMatrix, budget: f64, tol: &Tolerances) -> Self {
        let tr = h0.trace();
        if tr != ZERO && tr.norm() <= tol.spec {
            Self {
                h0: h0.traceless_part(),
                budget,
                projected_trace: Some(tr),
            }
        } else {
            Self {
                h0,
                budget,
                projected_trace: None,
            }
        }
    }

    pub fn h0(&self) -> &ComplexSquareMatrix {
        &self.h0
    }

    pub fn dim(&self) -> usize {
        self.h0.dim()
    }

    pub fn budget(&self) -> f64 {
        self.budget
    }

    pub fn alpha(&self) -> f64 {
        1.0 / self.budget
    }

    /// Trace removed from the input drift, if it was projected.
    pub fn projected_trace(&self) -> Option<Complex64> {
        self.projected_trace
    }

    /// `Tr(H0²)`.
    pub fn tr_h0_sq(&self) -> f64 {
        trace_product(&self.h0, &self.h0).re
    }

    /// Same drift with another budget.
    pub fn with_budget(&self, budget: f64) -> Self {
        Self {
            budget,
            ..self.clone()
        }
    }
}

/// All violated [`ControlProblem`] invariants; empty when the problem is valid.
pub fn validate(p: &ControlProblem, tol: &Tolerances) -> Vec<Violation> {
    let mut out = Vec::new();
    let defect = p.h0.hermitian_defect();
    if defect > tol.spec {
        out.push(Violation::NotHermitian { defect });
    }
    let trace = p.h0.trace();
    if trace.norm() > tol.spec {
        out.push(Violation::NotTraceless { trace });
    }
    if !(p.budget > 0.0) || !p.budget.is_finite() {
        out.push(Violation::NonPositiveBudget { budget: p.budget });
    } else {
        let tr_h0_sq = p.tr_h0_sq();
        if !(tr_h0_sq < p.budget) {
            out.push(Violation::SmallWindViolated {
                tr_h0_sq,
                budget: p.budget,
            });
        }
    }
    out
}

pub(crate) fn require_valid(p: &ControlProblem, tol: &Tolerances) -> Result<()> {
    let v = validate(p, tol);
    if v.is_empty() {
        Ok(())
    } else {
        Err(Error::Invalid(v))
    }
}

/// Budget-to-drift ratio `ρ = budget / Tr(H0²)`.
pub fn rho(p: &ControlProblem) -> Result<f64> {
    let tr = p.tr_h0_sq();
    if !(tr > 0.0) {
        return Err(Error::DriftFree);
    }
    Ok(p.budget / tr)
}

/// Returns `(Tr(H²), N·⟨ψ|H²|ψ⟩)` where `|ψ⟩` is the uniform superposition of
/// the eigenvectors of `H`. The two agree for every Hermitian `H`.
pub fn uniform_superposition_check(h: &ComplexSquareMatrix, tol: &Tolerances) -> Result<(f64, f64)> {
    let spec = spectral_hermitian(h, tol)?;
    let n = h.dim();
    let amp = Complex64::new(1.0 / libm::sqrt(n as f64), 0.0);
    let psi: Vec<Complex64> = (0..n)
        .map(|i| (0..n).map(|k| spec.vector_component(i, k) * amp).sum())
        .collect();
    let h2 = h * h;
    let h2_psi = h2.apply(&psi);
    let expectation: Complex64 = psi.iter().zip(&h2_psi).map(|(a, b)| a.conj() * b).sum();
    Ok((h2.trace().re, n as f64 * expectation.re))
}

/// A control Hamiltonian to be checked against a problem's budget.
#[derive(Debug, Clone, PartialEq)]
pub struct ControlCandidate {
    pub hc: ComplexSquareMatrix,
}

impl ControlCandidate {
    pub fn new(hc: ComplexSquareMatrix) -> Self {
        Self { hc }
    }

    /// Hermitian, traceless, and `|Tr(Hc²) − budget| ≤ tol.budget·budget`.
    pub fn violations(&self, p: &ControlProblem, tol: &Tolerances) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.hc.dim() != p.dim() {
            out.push(Violation::DimensionMismatch {
                expected: p.dim(),
                got: self.hc.dim(),
            });
            return out;
        }
        let defect = self.hc.hermitian_defect();
        if defect > tol.spec {
            out.push(Violation::NotHermitian { defect });
        }
        let trace = self.hc.trace();
        if trace.norm() > tol.spec {
            out.push(Violation::NotTraceless { trace });
        }
        let tr_hc_sq = trace_product(&self.hc, &self.hc).re;
        if (tr_hc_sq - p.budget).abs() > tol.budget * p.budget {
            out.push(Violation::BudgetMismatch {
                tr_hc_sq,
                budget: p.budget,
            });
        }
        out
    }
}
