//! Optimal gate times for constant controls.
//!
//! A constant total Hamiltonian `A = H0 + Hc` moves `U` along the one-parameter
//! subgroup `exp(−itA)`. Reaching `O = exp(L)` at time `T` forces
//! `A = (i/T)·L`, and the time is the Randers length of that curve. For a
//! logarithm `L` this evaluates to
//!
//! ```text
//! T = 1/(ρ − 1) · (−i·Tr(H0·L)) / Tr(H0²) · (1 ± sqrt(1 + (ρ − 1)·Tr(H0²)·Tr(L²) / Tr(H0·L)²))
//! ```
//!
//! with the sign that makes `T` positive. `Tr(H0·L)` is purely imaginary, so
//! the prefactor is real. The orientation matters: the curve from `I` to `O`
//! has tangent `+L` per unit parameter, and the formula measures exactly that
//! tangent. Measuring `−L` instead gives the time to reach `O†`, see
//! [`TargetGate::reversed`].
//!
//! [`budget_quadratic_root`] computes the same time from a different route:
//! imposing `Tr(Hc²) = budget` on `Hc = (i/T)·L − H0` gives a quadratic in
//! `u = 1/T` with exactly one positive root.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::hamiltonians::{build_pauli, require_valid, rho, ControlProblem, PauliString};
use crate::matcore::{
    enumerate_log_branches, expm_hermitian_generator, logm_special_unitary, trace_product,
    ComplexSquareMatrix, LogBranch, I, ONE, ZERO,
};
use crate::{Error, Result, Tolerances};

/// A special-unitary target together with the logarithm used to reach it.
#[derive(Debug, Clone, PartialEq)]
pub struct TargetGate {
    o: ComplexSquareMatrix,
    branch: LogBranch,
}

impl TargetGate {
    /// Target with its principal traceless logarithm.
    pub fn new(o: ComplexSquareMatrix, tol: &Tolerances) -> Result<Self> {
        let branch = logm_special_unitary(&o, tol)?;
        Ok(Self { o, branch })
    }

    /// Target with a caller-chosen logarithm; `exp(branch)` must equal `o`.
    pub fn with_branch(o: ComplexSquareMatrix, branch: LogBranch, tol: &Tolerances) -> Result<Self> {
        o.check_dim(&branch.matrix)?;
        let defect = o.unitarity_defect();
        if defect > tol.spec {
            return Err(Error::NotUnitary(defect));
        }
        let det_defect = (o.determinant() - ONE).norm();
        if det_defect > tol.spec {
            return Err(Error::NotSpecial(det_defect));
        }
        let back = expm_hermitian_generator(&branch.matrix.scale(I), 1.0, tol)?;
        let defect = back.distance(&o);
        if defect > tol.spec {
            return Err(Error::NotUnitary(defect));
        }
        Ok(Self { o, branch })
    }

    pub fn o(&self) -> &ComplexSquareMatrix {
        &self.o
    }

    pub fn branch(&self) -> &LogBranch {
        &self.branch
    }

    /// The target `O†` reached along `−L`: the same curve walked backwards.
    pub fn reversed(&self) -> TargetGate {
        TargetGate {
            o: self.o.adjoint(),
            branch: self.branch.reversed(),
        }
    }
}

/// How [`t_opt_closed_form`] obtained its time.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    ClosedForm,
    /// `Tr(H0·L) = 0`, where the closed form is singular.
    BudgetQuadratic,
    /// `L = 0`: the target is the identity on this branch.
    Identity,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diagnostics {
    pub tr_h0_logo: Complex64,
    pub tr_logo_sq: f64,
    pub tr_h0_sq: f64,
    /// `Tr(hc_opt²) − budget`.
    pub budget_residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QslResult {
    pub t_opt: f64,
    pub rho: f64,
    /// `+1` or `−1`: which of `1 ± sqrt(…)` gave the positive time.
    pub root_sign: i8,
    /// `(i/T)·L − H0`; `None` when the target is reached at `T = 0`.
    pub hc_opt: Option<ComplexSquareMatrix>,
    pub branch_used: LogBranch,
    pub diagnostics: Diagnostics,
    pub route: Route,
}

struct Traces {
    tr_h0_sq: f64,
    tr_h0_l: Complex64,
    tr_l_sq: f64,
}

fn traces(p: &ControlProblem, l: &ComplexSquareMatrix) -> Traces {
    Traces {
        tr_h0_sq: p.tr_h0_sq(),
        tr_h0_l: trace_product(p.h0(), l),
        tr_l_sq: trace_product(l, l).re,
    }
}

fn is_degenerate(t: &Traces) -> bool {
    let scale = libm::sqrt(-t.tr_l_sq * t.tr_h0_sq);
    !(t.tr_h0_l.norm() > 1e-13 * scale)
}

/// Optimal constant-control time on the gate's chosen branch.
///
/// Routes through [`budget_quadratic_root`] when `Tr(H0·L) = 0`. Also
/// reconstructs the optimal control `hc_opt = (i/T)·L − H0`.
pub fn t_opt_closed_form(p: &ControlProblem, g: &TargetGate, tol: &Tolerances) -> Result<QslResult> {
    require_valid(p, tol)?;
    let l = &g.branch.matrix;
    p.h0().check_dim(l)?;
    let rho = rho(p)?;
    let tr = traces(p, l);

    if g.branch.is_zero() || l.frobenius_norm() <= tol.spec {
        return Ok(QslResult {
            t_opt: 0.0,
            rho,
            root_sign: 1,
            hc_opt: None,
            branch_used: g.branch.clone(),
            diagnostics: Diagnostics {
                tr_h0_logo: tr.tr_h0_l,
                tr_logo_sq: tr.tr_l_sq,
                tr_h0_sq: tr.tr_h0_sq,
                budget_residual: 0.0,
            },
            route: Route::Identity,
        });
    }

    let (t_opt, root_sign, route) = if is_degenerate(&tr) {
        (budget_quadratic_root(p, &g.branch)?, 1, Route::BudgetQuadratic)
    } else {
        let prefactor = (-I * tr.tr_h0_l).re / ((rho - 1.0) * tr.tr_h0_sq);
        let s2m1 = ((rho - 1.0) * tr.tr_h0_sq * tr.tr_l_sq / (tr.tr_h0_l * tr.tr_h0_l)).re;
        let s = libm::sqrt(1.0 + s2m1);
        if prefactor > 0.0 {
            (prefactor * (1.0 + s), 1, Route::ClosedForm)
        } else {
            // c·(1 − s) = |c|·(s² − 1)/(1 + s)
            (-prefactor * s2m1 / (1.0 + s), -1, Route::ClosedForm)
        }
    };
    if !(t_opt > 0.0) || !t_opt.is_finite() {
        return Err(Error::NoPositiveRoot);
    }

    let hc = (&l.scale(I / t_opt) - p.h0()).hermitian_part();
    let budget_residual = trace_product(&hc, &hc).re - p.budget();
    Ok(QslResult {
        t_opt,
        rho,
        root_sign,
        hc_opt: Some(hc),
        branch_used: g.branch.clone(),
        diagnostics: Diagnostics {
            tr_h0_logo: tr.tr_h0_l,
            tr_logo_sq: tr.tr_l_sq,
            tr_h0_sq: tr.tr_h0_sq,
            budget_residual,
        },
        route,
    })
}

/// Time from the positive root `u = 1/T` of
/// `(−Tr L²)·u² − 2i·Tr(L·H0)·u + (Tr H0² − budget) = 0`.
///
/// Does not validate the problem, so it can be probed at the small-wind
/// boundary; fails if no positive root exists.
pub fn budget_quadratic_root(p: &ControlProblem, branch: &LogBranch) -> Result<f64> {
    let l = &branch.matrix;
    p.h0().check_dim(l)?;
    let a = -trace_product(l, l).re;
    if !(a > 0.0) {
        return Err(Error::ZeroLogarithm);
    }
    let b = (Complex64::new(0.0, -2.0) * trace_product(l, p.h0())).re;
    let c = p.tr_h0_sq() - p.budget();
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return Err(Error::NoPositiveRoot);
    }
    let sq = libm::sqrt(disc);
    let u = if b <= 0.0 {
        (-b + sq) / (2.0 * a)
    } else {
        2.0 * c / (-b - sq)
    };
    if !(u > 0.0) {
        return Err(Error::NoPositiveRoot);
    }
    Ok(1.0 / u)
}

/// [`t_opt_closed_form`] on every branch from [`enumerate_log_branches`],
/// sorted ascending by time.
pub fn t_opt_over_branches(
    p: &ControlProblem,
    o: &ComplexSquareMatrix,
    max_shift: u32,
    tol: &Tolerances,
) -> Result<Vec<QslResult>> {
    require_valid(p, tol)?;
    let mut out = Vec::new();
    for branch in enumerate_log_branches(o, max_shift, tol)? {
        let gate = TargetGate {
            o: o.clone(),
            branch,
        };
        out.push(t_opt_closed_form(p, &gate, tol)?);
    }
    out.sort_by(|a, b| a.t_opt.total_cmp(&b.t_opt));
    Ok(out)
}

/// The two worked setups.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Preset {
    /// Spin-½ in a fixed field `H0 = bx·σx + by·σy`, control field of
    /// strength `d` (`budget = 2d²`), target `[[0, −1], [1, 0]]`.
    SingleSpin { bx: f64, by: f64, d: f64 },
    /// Two-spin Heisenberg drift `Σ λ_k σ_k⊗σ_k`, budget `1/α`, target
    /// `e^{iπ/4}·SWAP`.
    SwapChain { lambda: [f64; 3], alpha: f64 },
}

impl Preset {
    pub const NAMES: [&'static str; 2] = ["single-spin", "swap-chain"];

    /// Parameters: `bx`, `by`, `d` for `single-spin` (defaults 0, 0.3, 1);
    /// `lx`, `ly`, `lz`, `alpha` for `swap-chain` (defaults 1, 1, 1, 1/24).
    pub fn from_name(name: &str, params: &BTreeMap<String, f64>) -> Result<Self> {
        let take = |allowed: &[&str]| -> Result<()> {
            match params.keys().find(|k| !allowed.contains(&k.as_str())) {
                Some(k) => Err(Error::UnknownParameter(k.clone())),
                None => Ok(()),
            }
        };
        let get = |k: &str, default: f64| params.get(k).copied().unwrap_or(default);
        match name {
            "single-spin" => {
                take(&["bx", "by", "d"])?;
                Ok(Preset::SingleSpin {
                    bx: get("bx", 0.0),
                    by: get("by", 0.3),
                    d: get("d", 1.0),
                })
            }
            "swap-chain" => {
                take(&["lx", "ly", "lz", "alpha"])?;
                Ok(Preset::SwapChain {
                    lambda: [get("lx", 1.0), get("ly", 1.0), get("lz", 1.0)],
                    alpha: get("alpha", 1.0 / 24.0),
                })
            }
            other => Err(Error::UnknownPreset(other.to_string())),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Preset::SingleSpin { .. } => "single-spin",
            Preset::SwapChain { .. } => "swap-chain",
        }
    }

    pub fn params(&self) -> BTreeMap<String, f64> {
        let mut m = BTreeMap::new();
        match *self {
            Preset::SingleSpin { bx, by, d } => {
                m.insert("bx".to_string(), bx);
                m.insert("by".to_string(), by);
                m.insert("d".to_string(), d);
            }
            Preset::SwapChain { lambda, alpha } => {
                m.insert("lx".to_string(), lambda[0]);
                m.insert("ly".to_string(), lambda[1]);
                m.insert("lz".to_string(), lambda[2]);
                m.insert("alpha".to_string(), alpha);
            }
        }
        m
    }

    pub fn build(&self, tol: &Tolerances) -> Result<(ControlProblem, TargetGate)> {
        match *self {
            Preset::SingleSpin { bx, by, d } => {
                if !(bx * bx + by * by < d * d) {
                    return Err(Error::PresetParameters("single-spin needs bx² + by² < d²"));
                }
                let h0 = build_pauli(&[PauliString::new("X", bx), PauliString::new("Y", by)])?;
                let o = ComplexSquareMatrix::from_rows(&[[ZERO, -ONE], [ONE, ZERO]])?;
                Ok((ControlProblem::new(h0, 2.0 * d * d), TargetGate::new(o, tol)?))
            }
            Preset::SwapChain { lambda, alpha } => {
                let l2: f64 = lambda.iter().map(|x| x * x).sum();
                if !(alpha > 0.0) || !(4.0 * alpha * l2 < 1.0) {
                    return Err(Error::PresetParameters("swap-chain needs α > 0 and 4αλ² < 1"));
                }
                let h0 = build_pauli(&[
                    PauliString::new("XX", lambda[0]),
                    PauliString::new("YY", lambda[1]),
                    PauliString::new("ZZ", lambda[2]),
                ])?;
                Ok((ControlProblem::from_alpha(h0, alpha), TargetGate::new(swap_rephased(), tol)?))
            }
        }
    }
}

/// `e^{iπ/4}·SWAP`, the determinant-one swap gate.
pub fn swap_rephased() -> ComplexSquareMatrix {
    let ph = Complex64::from_polar(1.0, PI / 4.0);
    ComplexSquareMatrix::from_fn(4, |i, j| {
        let target = match j {
            1 => 2,
            2 => 1,
            k => k,
        };
        if i == target {
            ph
        } else {
            ZERO
        }
    })
}

/// Builds a preset by name, see [`Preset::from_name`].
pub fn preset(
    name: &str,
    params: &BTreeMap<String, f64>,
    tol: &Tolerances,
) -> Result<(ControlProblem, TargetGate)> {
    Preset::from_name(name, params)?.build(tol)
}
