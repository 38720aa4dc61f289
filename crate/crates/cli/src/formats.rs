//! JSON schemas read and written by the CLI. See `docs/formats.md`.

use std::collections::BTreeMap;

use qsl_core::oracle::SearchConfig;
use qsl_core::qsl::Route;
use qsl_core::{
    build_pauli, Complex64, ComplexSquareMatrix, ControlProblem, ControlSchedule, LogBranch,
    PauliString, Preset, QslResult, SearchReport, Segment, TargetGate, Tolerances,
};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EntryJson {
    Pair([f64; 2]),
    Real(f64),
}

/// `{"dim": n, "entries": [[[re, im], …], …]}`, rows in order.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub dim: usize,
    pub entries: Vec<Vec<EntryJson>>,
}

impl MatrixJson {
    pub fn from_matrix(m: &ComplexSquareMatrix) -> Self {
        let n = m.dim();
        Self {
            dim: n,
            entries: (0..n)
                .map(|i| (0..n).map(|j| EntryJson::Pair([m.get(i, j).re, m.get(i, j).im])).collect())
                .collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<ComplexSquareMatrix, CliError> {
        if self.entries.len() != self.dim || self.entries.iter().any(|r| r.len() != self.dim) {
            return Err(CliError::parse(format!(
                "matrix declares dim {} but entries are not {0}×{0}",
                self.dim
            )));
        }
        let flat: Vec<Complex64> = self
            .entries
            .iter()
            .flatten()
            .map(|e| match *e {
                EntryJson::Pair([re, im]) => Complex64::new(re, im),
                EntryJson::Real(re) => Complex64::new(re, 0.0),
            })
            .collect();
        Ok(ComplexSquareMatrix::from_row_major(self.dim, &flat)?)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PauliTermJson {
    pub string: String,
    pub coeff: f64,
}

/// Exactly one of `pauli_terms` or `matrix`.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HamiltonianJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pauli_terms: Option<Vec<PauliTermJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<MatrixJson>,
}

impl HamiltonianJson {
    pub fn to_matrix(&self) -> Result<ComplexSquareMatrix, CliError> {
        match (&self.pauli_terms, &self.matrix) {
            (Some(terms), None) => {
                let strings: Vec<PauliString> =
                    terms.iter().map(|t| PauliString::new(t.string.clone(), t.coeff)).collect();
                Ok(build_pauli(&strings)?)
            }
            (None, Some(m)) => m.to_matrix(),
            _ => Err(CliError::parse("a Hamiltonian needs exactly one of \"pauli_terms\" or \"matrix\"")),
        }
    }
}

/// A target given as a matrix or as the name of a preset whose target to use.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TargetJson {
    Named(String),
    Matrix(MatrixJson),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SegmentJson {
    pub hc: HamiltonianJson,
    pub duration: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleJson {
    pub segments: Vec<SegmentJson>,
    #[serde(default)]
    pub relax_budget: bool,
}

impl ScheduleJson {
    pub fn to_schedule(&self) -> Result<ControlSchedule, CliError> {
        let segments = self
            .segments
            .iter()
            .map(|s| {
                Ok(Segment {
                    hc: s.hc.to_matrix()?,
                    duration: s.duration,
                })
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        let schedule = ControlSchedule::new(segments);
        Ok(if self.relax_budget { schedule.relaxed() } else { schedule })
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchJson {
    pub samples: Option<usize>,
    pub t_max_factor: Option<f64>,
    pub refine_iters: Option<usize>,
    pub seed: Option<u64>,
    pub dist_tol: Option<f64>,
    pub quotient_center: Option<bool>,
    pub scan_points: Option<usize>,
    pub refine_seeds: Option<usize>,
    pub max_dim: Option<usize>,
}

impl SearchJson {
    pub fn apply(&self, cfg: &mut SearchConfig) {
        cfg.samples = self.samples.or(cfg.samples);
        cfg.refine_seeds = self.refine_seeds.or(cfg.refine_seeds);
        if let Some(v) = self.t_max_factor {
            cfg.t_max_factor = v;
        }
        if let Some(v) = self.refine_iters {
            cfg.refine_iters = v;
        }
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        if let Some(v) = self.dist_tol {
            cfg.dist_tol = v;
        }
        if let Some(v) = self.quotient_center {
            cfg.quotient_center = v;
        }
        if let Some(v) = self.scan_points {
            cfg.scan_points = v;
        }
        if let Some(v) = self.max_dim {
            cfg.max_dim = v;
        }
    }
}

/// The single input document shared by `tmin`, `norm`, `length` and `verify`.
///
/// The problem comes either from `preset` (+ optional `params`) or from
/// `h0` with exactly one of `budget` / `alpha`.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputJson {
    pub preset: Option<String>,
    pub params: Option<BTreeMap<String, f64>>,
    pub h0: Option<HamiltonianJson>,
    pub budget: Option<f64>,
    pub alpha: Option<f64>,
    pub target: Option<TargetJson>,
    pub branch_max_shift: Option<u32>,
    pub generator: Option<MatrixJson>,
    pub schedule: Option<ScheduleJson>,
    pub search: Option<SearchJson>,
}

pub struct Loaded {
    pub problem: ControlProblem,
    pub target: Option<ComplexSquareMatrix>,
}

impl InputJson {
    pub fn load(&self, tol: &Tolerances) -> Result<Loaded, CliError> {
        match (&self.preset, &self.h0) {
            (Some(name), None) => {
                if self.budget.is_some() || self.alpha.is_some() {
                    return Err(CliError::parse("a preset fixes the budget; drop \"budget\"/\"alpha\""));
                }
                let params = self.params.clone().unwrap_or_default();
                let (problem, gate) = Preset::from_name(name, &params)?.build(tol)?;
                let target = match &self.target {
                    None => Some(gate.o().clone()),
                    Some(t) => Some(target_matrix(t, tol)?),
                };
                Ok(Loaded { problem, target })
            }
            (None, Some(h0)) => {
                if self.params.is_some() {
                    return Err(CliError::parse("\"params\" is only meaningful with \"preset\""));
                }
                let h0 = h0.to_matrix()?;
                let budget = match (self.budget, self.alpha) {
                    (Some(b), None) => b,
                    (None, Some(a)) => 1.0 / a,
                    _ => return Err(CliError::parse("give exactly one of \"budget\" or \"alpha\"")),
                };
                let problem = ControlProblem::with_tolerances(h0, budget, tol);
                if let Some(tr) = problem.projected_trace() {
                    eprintln!("qsl: warning: removed trace {}{:+}i from h0", tr.re, tr.im);
                }
                let target = self.target.as_ref().map(|t| target_matrix(t, tol)).transpose()?;
                Ok(Loaded { problem, target })
            }
            _ => Err(CliError::parse("give exactly one of \"preset\" or \"h0\"")),
        }
    }
}

fn target_matrix(t: &TargetJson, tol: &Tolerances) -> Result<ComplexSquareMatrix, CliError> {
    match t {
        TargetJson::Matrix(m) => m.to_matrix(),
        TargetJson::Named(name) => {
            let (_, gate) = Preset::from_name(name, &BTreeMap::new())?.build(tol)?;
            Ok(gate.o().clone())
        }
    }
}

#[derive(Debug, Serialize)]
pub struct BranchJson {
    pub log: MatrixJson,
    pub branch_offsets: Vec<i64>,
    pub eigenphases: Vec<f64>,
    pub near_branch_cut: bool,
}

impl BranchJson {
    pub fn new(b: &LogBranch) -> Self {
        Self {
            log: MatrixJson::from_matrix(&b.matrix),
            branch_offsets: b.branch_offsets.clone(),
            eigenphases: b.eigenphases.clone(),
            near_branch_cut: b.near_branch_cut,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct DiagnosticsJson {
    #[serde(rename = "tr_H0_logO")]
    pub tr_h0_logo: [f64; 2],
    #[serde(rename = "tr_logO_sq")]
    pub tr_logo_sq: f64,
    #[serde(rename = "tr_H0_sq")]
    pub tr_h0_sq: f64,
    pub budget_residual: f64,
}

#[derive(Debug, Serialize)]
pub struct QslResultJson {
    pub t_opt: f64,
    pub rho: f64,
    pub root_sign: i8,
    pub route: &'static str,
    pub hc_opt: Option<MatrixJson>,
    pub branch: BranchJson,
    pub diagnostics: DiagnosticsJson,
}

pub fn route_name(r: Route) -> &'static str {
    match r {
        Route::ClosedForm => "closed_form",
        Route::BudgetQuadratic => "budget_quadratic",
        Route::Identity => "identity",
    }
}

impl QslResultJson {
    pub fn new(r: &QslResult) -> Self {
        let d = &r.diagnostics;
        Self {
            t_opt: r.t_opt,
            rho: r.rho,
            root_sign: r.root_sign,
            route: route_name(r.route),
            hc_opt: r.hc_opt.as_ref().map(MatrixJson::from_matrix),
            branch: BranchJson::new(&r.branch_used),
            diagnostics: DiagnosticsJson {
                tr_h0_logo: [d.tr_h0_logo.re, d.tr_h0_logo.im],
                tr_logo_sq: d.tr_logo_sq,
                tr_h0_sq: d.tr_h0_sq,
                budget_residual: d.budget_residual,
            },
        }
    }
}

#[derive(Debug, Serialize)]
pub struct SearchReportJson {
    pub best_time: f64,
    pub best_control: MatrixJson,
    pub best_distance: f64,
    pub samples_evaluated: usize,
    pub refinement_iters: usize,
    pub success: bool,
    pub t_max: f64,
    pub hit_times: Vec<f64>,
}

impl SearchReportJson {
    pub fn new(r: &SearchReport) -> Self {
        Self {
            best_time: r.best_time,
            best_control: MatrixJson::from_matrix(&r.best_control),
            best_distance: r.best_distance,
            samples_evaluated: r.samples_evaluated,
            refinement_iters: r.refinement_iters,
            success: r.success,
            t_max: r.t_max,
            hit_times: r.hit_times.clone(),
        }
    }
}

pub fn gate_for(o: &ComplexSquareMatrix, tol: &Tolerances) -> Result<TargetGate, CliError> {
    Ok(TargetGate::new(o.clone(), tol)?)
}
