//! The Randers navigation norm on SU(N) and curve lengths.
//!
//! With the background metric `g(X, Y) = α·Re Tr(X†Y)` and the wind
//! `W = −i·H0·U`, Zermelo navigation yields the Randers norm
//!
//! ```text
//! F(X) = [ −g(X,W) + sqrt(g(X,W)² + (1 − g(W,W))·g(X,X)) ] / (1 − g(W,W))
//! ```
//!
//! whose unit ball is exactly the set of velocities `−i(H0 + Hc)U` with
//! `Tr(Hc²) = 1/α`. Both `g` and `W` are right-invariant, so `F` only sees the
//! generator `X·U†`; the functions here take generators and never a base point.
//!
//! Sign conventions. [`randers_norm_general`] takes the generator `X` itself
//! (an anti-Hermitian matrix; a Schrödinger trajectory with Hamiltonian `H` has
//! `X = −iH`). [`randers_norm_su`] takes a Hermitian `A` and measures the
//! tangent `iA·U`, so `randers_norm_su(A) = randers_norm_general(iA)` and the
//! Hamiltonian `H` corresponds to `A = −H`.

use alloc::vec::Vec;

use crate::hamiltonians::{require_valid, ControlCandidate, ControlProblem, Violation};
use crate::matcore::{exp_from_spectrum, spectral_hermitian, trace_product, ComplexSquareMatrix, I};
use crate::{Error, Result, Tolerances};

/// Panels per segment for the first quadrature pass.
pub const INITIAL_PANELS: usize = 256;
/// Panel cap per segment.
pub const MAX_PANELS: usize = 1 << 14;
/// Relative agreement between successive panel doublings.
pub const QUADRATURE_RTOL: f64 = 1e-8;

/// A valid [`ControlProblem`] viewed as navigation data: metric `g = α·HS`
/// and wind generator `−i·H0`.
#[derive(Debug, Clone)]
pub struct NavigationData {
    problem: ControlProblem,
    wind: ComplexSquareMatrix,
    g_ww: f64,
    tol: Tolerances,
}

impl NavigationData {
    pub fn new(problem: ControlProblem, tol: &Tolerances) -> Result<Self> {
        require_valid(&problem, tol)?;
        let wind = problem.h0().scale(-I);
        let mut nav = Self {
            problem,
            wind,
            g_ww: 0.0,
            tol: *tol,
        };
        nav.g_ww = nav.g(&nav.wind, &nav.wind);
        Ok(nav)
    }

    pub fn problem(&self) -> &ControlProblem {
        &self.problem
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    /// Wind generator `−i·H0`.
    pub fn wind(&self) -> &ComplexSquareMatrix {
        &self.wind
    }

    /// Background metric `α·Re Tr(X†Y)`.
    pub fn g(&self, x: &ComplexSquareMatrix, y: &ComplexSquareMatrix) -> f64 {
        let n = x.dim();
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                acc += (x.get(j, i).conj() * y.get(j, i)).re;
            }
        }
        self.problem.alpha() * acc
    }

    /// `g(W, W) = α·Tr(H0²) = 1/ρ`, below 1 for valid data.
    pub fn wind_strength(&self) -> f64 {
        self.g_ww
    }
}

/// Randers norm of the anti-Hermitian generator `x`.
///
/// Uses the rationalized form `g(X,X) / (g(X,W) + sqrt(…))` when
/// `g(X,W) > 0`, which is the same quantity without the cancellation.
pub fn randers_norm_general(nav: &NavigationData, x: &ComplexSquareMatrix) -> Result<f64> {
    x.check_dim(nav.wind())?;
    let defect = x.anti_hermitian_defect();
    if defect > nav.tol.spec {
        return Err(Error::NotAntiHermitian(defect));
    }
    let g_xw = nav.g(x, nav.wind());
    let g_xx = nav.g(x, x);
    let a = 1.0 - nav.g_ww;
    let root = libm::sqrt(g_xw * g_xw + a * g_xx);
    if g_xw <= 0.0 {
        Ok((root - g_xw) / a)
    } else {
        Ok(g_xx / (g_xw + root))
    }
}

/// Both roots `c·(1 ± s)` of the specialized SU(N) form for the tangent
/// `iA·U`, as `[plus, minus]`, where
/// `c = Tr(A·H0) / ((ρ − 1)·Tr(H0²))` and
/// `s = sqrt(1 + (ρ − 1)·Tr(H0²)·Tr(A²) / Tr(A·H0)²)`.
pub fn randers_su_roots(nav: &NavigationData, a: &ComplexSquareMatrix) -> Result<[f64; 2]> {
    let parts = su_parts(nav, a)?;
    Ok([parts.c * (1.0 + parts.s), parts.c * (1.0 - parts.s)])
}

struct SuParts {
    c: f64,
    s: f64,
    /// `s² − 1`, kept separately for the cancellation-free small root.
    s2m1: f64,
}

fn su_parts(nav: &NavigationData, a: &ComplexSquareMatrix) -> Result<SuParts> {
    a.check_dim(nav.wind())?;
    a.require_hermitian(nav.tol.spec)?;
    let h0 = nav.problem.h0();
    let tr_h0_sq = nav.problem.tr_h0_sq();
    let tr_a_h0 = trace_product(a, h0).re;
    let tr_a_sq = trace_product(a, a).re;
    let scale = libm::sqrt(tr_a_sq * tr_h0_sq);
    if !(tr_a_h0.abs() > 1e-13 * scale) {
        return Err(Error::SingularSpecializedForm);
    }
    let rho = nav.problem.budget() / tr_h0_sq;
    let s2m1 = (rho - 1.0) * tr_h0_sq * tr_a_sq / (tr_a_h0 * tr_a_h0);
    Ok(SuParts {
        c: tr_a_h0 / ((rho - 1.0) * tr_h0_sq),
        s: libm::sqrt(1.0 + s2m1),
        s2m1,
    })
}

/// Specialized SU(N) form of the norm for the tangent `iA·U`; of the two
/// roots `c·(1 ± s)` exactly one is nonnegative and that one is returned.
///
/// Singular where `Tr(A·H0) = 0`; use [`randers_norm_general`] there.
pub fn randers_norm_su(nav: &NavigationData, a: &ComplexSquareMatrix) -> Result<f64> {
    let p = su_parts(nav, a)?;
    if p.c > 0.0 {
        Ok(p.c * (1.0 + p.s))
    } else {
        // c·(1 − s) = |c|·(s² − 1)/(s + 1)
        Ok(-p.c * p.s2m1 / (p.s + 1.0))
    }
}

/// One piece of a piecewise-constant control.
#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    pub hc: ComplexSquareMatrix,
    pub duration: f64,
}

/// Piecewise-constant control schedule `Hc(t)`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ControlSchedule {
    pub segments: Vec<Segment>,
    /// Skip the budget check, so off-budget segments can be measured.
    pub relax_budget: bool,
}

impl ControlSchedule {
    pub fn new(segments: Vec<Segment>) -> Self {
        Self {
            segments,
            relax_budget: false,
        }
    }

    pub fn relaxed(mut self) -> Self {
        self.relax_budget = true;
        self
    }

    pub fn total_duration(&self) -> f64 {
        self.segments.iter().map(|s| s.duration).sum()
    }

    /// Per-segment violations (segment index, violation). With
    /// `relax_budget`, budget mismatches are not reported.
    pub fn violations(&self, p: &ControlProblem, tol: &Tolerances) -> Vec<(usize, Violation)> {
        let mut out = Vec::new();
        for (k, seg) in self.segments.iter().enumerate() {
            for v in ControlCandidate::new(seg.hc.clone()).violations(p, tol) {
                if self.relax_budget && matches!(v, Violation::BudgetMismatch { .. }) {
                    continue;
                }
                out.push((k, v));
            }
        }
        out
    }
}

/// Length of the trajectory `U_t` driven by `H0 + Hc(t)` from the identity.
///
/// Each segment is integrated by composite Simpson quadrature, starting at
/// [`INITIAL_PANELS`] panels and doubling until successive estimates agree to
/// [`QUADRATURE_RTOL`] (capped at [`MAX_PANELS`]). At every node the tangent
/// `−iH·U_t` is right-translated back to its generator before the norm is
/// taken. Nodes are summed sequentially in time order, so results are
/// reproducible bit for bit.
pub fn curve_length(nav: &NavigationData, schedule: &ControlSchedule) -> Result<f64> {
    let tol = nav.tol;
    for (index, seg) in schedule.segments.iter().enumerate() {
        if !(seg.duration > 0.0) {
            return Err(Error::BadDuration {
                index,
                duration: seg.duration,
            });
        }
    }
    let violations: Vec<Violation> = schedule
        .violations(nav.problem(), &tol)
        .into_iter()
        .map(|(_, v)| v)
        .collect();
    if !violations.is_empty() {
        return Err(Error::Invalid(violations));
    }

    let n = nav.problem().dim();
    let mut u_start = ComplexSquareMatrix::identity(n);
    let mut total = 0.0;
    for seg in &schedule.segments {
        let h = nav.problem().h0() + &seg.hc;
        let spec = spectral_hermitian(&h, &tol)?;
        let tangent_gen = h.scale(-I);
        let integrand = |t: f64| -> Result<f64> {
            let u_t = &exp_from_spectrum(&spec, t) * &u_start;
            let velocity = &tangent_gen * &u_t;
            let generator = (&velocity * &u_t.adjoint()).anti_hermitian_part();
            randers_norm_general(nav, &generator)
        };
        total += adaptive_simpson(integrand, seg.duration)?;
        u_start = &exp_from_spectrum(&spec, seg.duration) * &u_start;
    }
    Ok(total)
}

fn simpson(f: &impl Fn(f64) -> Result<f64>, length: f64, panels: usize) -> Result<f64> {
    let h = length / panels as f64;
    let mut acc = f(0.0)? + f(length)?;
    for k in 1..panels {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(k as f64 * h)?;
    }
    Ok(acc * h / 3.0)
}

fn adaptive_simpson(f: impl Fn(f64) -> Result<f64>, length: f64) -> Result<f64> {
    let mut panels = INITIAL_PANELS;
    let mut prev = simpson(&f, length, panels)?;
    while panels < MAX_PANELS {
        panels *= 2;
        let next = simpson(&f, length, panels)?;
        if (next - prev).abs() <= QUADRATURE_RTOL * next.abs().max(f64::MIN_POSITIVE) {
            return Ok(next);
        }
        prev = next;
    }
    Ok(prev)
}
