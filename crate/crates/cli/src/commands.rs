use std::collections::BTreeMap;
use std::f64::consts::TAU;

use qsl_core::oracle::SearchConfig;
use qsl_core::{
    brute_force_min_time, curve_length, randers_norm_general, randers_norm_su, rho,
    t_opt_closed_form, t_opt_over_branches, Complex64, ComplexSquareMatrix, Error,
    NavigationData, Preset, Tolerances,
};
use serde::Serialize;
use serde_json::json;

use crate::error::{CliError, ExitKind};
use crate::formats::{
    gate_for, BranchJson, InputJson, Loaded, MatrixJson, QslResultJson, SearchReportJson,
};
use crate::json;

/// Settings from the global flags.
#[derive(Debug, Clone)]
pub struct Settings {
    pub tol: Tolerances,
    pub seed: Option<u64>,
    pub dist_tol: Option<f64>,
    pub branch_max_shift: Option<u32>,
    pub quotient_center: bool,
    pub relax_budget: bool,
}

pub struct Output {
    pub json: String,
    pub summary: String,
    pub failure: Option<ExitKind>,
}

impl Output {
    fn ok(value: &impl Serialize, summary: String) -> Self {
        Self {
            json: json::to_string(value),
            summary,
            failure: None,
        }
    }
}

fn require_target(loaded: &Loaded, command: &str) -> Result<ComplexSquareMatrix, CliError> {
    loaded
        .target
        .clone()
        .ok_or_else(|| CliError::parse(format!("{command} needs a \"target\"")))
}

pub fn tmin(input: &InputJson, s: &Settings) -> Result<Output, CliError> {
    let loaded = input.load(&s.tol)?;
    let o = require_target(&loaded, "tmin")?;
    let shift = s.branch_max_shift.or(input.branch_max_shift).unwrap_or(0);
    let p = &loaded.problem;
    let results = if shift == 0 {
        vec![t_opt_closed_form(p, &gate_for(&o, &s.tol)?, &s.tol)?]
    } else {
        t_opt_over_branches(p, &o, shift, &s.tol)?
    };
    let best = &results[0];
    let summary = if shift == 0 {
        format!("t_opt = {} (principal branch, rho = {})", best.t_opt, best.rho)
    } else {
        format!(
            "t_opt = {} (shortest of {} branches, rho = {})",
            best.t_opt,
            results.len(),
            best.rho
        )
    };
    let value = json!({
        "rho": best.rho,
        "branch_max_shift": shift,
        "results": results.iter().map(QslResultJson::new).collect::<Vec<_>>(),
    });
    Ok(Output::ok(&value, summary))
}

pub fn norm(input: &InputJson, s: &Settings) -> Result<Output, CliError> {
    let loaded = input.load(&s.tol)?;
    let x = input
        .generator
        .as_ref()
        .ok_or_else(|| CliError::parse("norm needs a \"generator\""))?
        .to_matrix()?;
    let nav = NavigationData::new(loaded.problem, &s.tol)?;
    let f = randers_norm_general(&nav, &x)?;
    // generator X = i·A
    let specialized = match randers_norm_su(&nav, &x.scale(Complex64::new(0.0, -1.0))) {
        Ok(v) => Some(v),
        Err(Error::SingularSpecializedForm) => None,
        Err(e) => return Err(e.into()),
    };
    let value = json!({
        "norm": f,
        "norm_specialized": specialized,
        "wind_strength": nav.wind_strength(),
    });
    Ok(Output::ok(&value, format!("F(X) = {f}")))
}

pub fn length(input: &InputJson, s: &Settings) -> Result<Output, CliError> {
    let loaded = input.load(&s.tol)?;
    let mut schedule = input
        .schedule
        .as_ref()
        .ok_or_else(|| CliError::parse("length needs a \"schedule\""))?
        .to_schedule()?;
    if s.relax_budget {
        schedule = schedule.relaxed();
    }
    let nav = NavigationData::new(loaded.problem, &s.tol)?;
    let length = curve_length(&nav, &schedule)?;
    let elapsed = schedule.total_duration();
    let residual = (length - elapsed).abs();
    let value = json!({
        "length": length,
        "elapsed": elapsed,
        "unit_speed_residual": residual,
    });
    Ok(Output::ok(
        &value,
        format!("length = {length}, elapsed = {elapsed}, |length - elapsed| = {residual:e}"),
    ))
}

const VERIFY_BAND: (f64, f64) = (1.0 - 1e-6, 1.05);

pub fn verify(input: &InputJson, s: &Settings) -> Result<Output, CliError> {
    let loaded = input.load(&s.tol)?;
    let o = require_target(&loaded, "verify")?;
    let p = &loaded.problem;

    let mut cfg = SearchConfig::default();
    if let Some(search) = &input.search {
        search.apply(&mut cfg);
    }
    cfg.seed = s.seed.unwrap_or(cfg.seed);
    cfg.dist_tol = s.dist_tol.unwrap_or(cfg.dist_tol);
    cfg.quotient_center |= s.quotient_center;
    cfg.branch_max_shift = s.branch_max_shift.or(input.branch_max_shift).unwrap_or(2);

    let n = o.dim();
    let targets: Vec<ComplexSquareMatrix> = if cfg.quotient_center {
        (0..n)
            .map(|k| o.scale(Complex64::from_polar(1.0, TAU * k as f64 / n as f64)))
            .collect()
    } else {
        vec![o.clone()]
    };
    let mut branches = Vec::new();
    for (center, target) in targets.iter().enumerate() {
        for r in t_opt_over_branches(p, target, cfg.branch_max_shift, &s.tol)? {
            branches.push((center, r));
        }
    }
    branches.sort_by(|a, b| a.1.t_opt.total_cmp(&b.1.t_opt));
    let min_t_opt = branches
        .iter()
        .map(|(_, r)| r.t_opt)
        .filter(|&t| t > 0.0)
        .fold(f64::INFINITY, f64::min);

    let report = brute_force_min_time(p, &o, &cfg, &s.tol)?;
    let ratio = report.best_time / min_t_opt;
    let agree = report.success && ratio >= VERIFY_BAND.0 && ratio <= VERIFY_BAND.1;

    #[derive(Serialize)]
    struct BranchTime {
        t_opt: f64,
        root_sign: i8,
        center: usize,
        branch_offsets: Vec<i64>,
    }
    let value = json!({
        "branch_max_shift": cfg.branch_max_shift,
        "quotient_center": cfg.quotient_center,
        "branches": branches.iter().map(|(c, r)| BranchTime {
            t_opt: r.t_opt,
            root_sign: r.root_sign,
            center: *c,
            branch_offsets: r.branch_used.branch_offsets.clone(),
        }).collect::<Vec<_>>(),
        "min_t_opt": min_t_opt,
        "search": SearchReportJson::new(&report),
        "ratio": ratio,
        "agreement": agree,
    });
    let summary = format!(
        "search best_time = {} (distance {:.1e}), formula min t_opt = {}, ratio = {ratio}: {}",
        report.best_time,
        report.best_distance,
        min_t_opt,
        if agree { "agreement" } else { "DISCREPANCY" }
    );
    Ok(Output {
        json: json::to_string(&value),
        summary,
        failure: (!agree).then_some(ExitKind::Discrepancy),
    })
}

pub fn preset_report(name: &str, params: &BTreeMap<String, f64>, s: &Settings) -> Result<Output, CliError> {
    let preset = Preset::from_name(name, params)?;
    let (p, g) = preset.build(&s.tol)?;
    let fwd = t_opt_closed_form(&p, &g, &s.tol)?;
    let rev = t_opt_closed_form(&p, &g.reversed(), &s.tol)?;
    let d = &fwd.diagnostics;
    let value = json!({
        "preset": preset.name(),
        "params": preset.params(),
        "h0": MatrixJson::from_matrix(p.h0()),
        "budget": p.budget(),
        "alpha": p.alpha(),
        "rho": rho(&p)?,
        "tr_H0_sq": d.tr_h0_sq,
        "target": MatrixJson::from_matrix(g.o()),
        "logO": BranchJson::new(g.branch()),
        "tr_H0_logO": [d.tr_h0_logo.re, d.tr_h0_logo.im],
        "tr_logO_sq": d.tr_logo_sq,
        "t_opt": fwd.t_opt,
        "root_sign": fwd.root_sign,
        "hc_opt": fwd.hc_opt.as_ref().map(MatrixJson::from_matrix),
        "budget_residual": d.budget_residual,
        "adjoint_target": {
            "t_opt": rev.t_opt,
            "root_sign": rev.root_sign,
            "hc_opt": rev.hc_opt.as_ref().map(MatrixJson::from_matrix),
        },
    });
    let summary = format!(
        "{}: rho = {}, Tr(H0 logO) = {:+}i, Tr(logO^2) = {}, t_opt = {} (adjoint target: {})",
        preset.name(),
        fwd.rho,
        d.tr_h0_logo.im,
        d.tr_logo_sq,
        fwd.t_opt,
        rev.t_opt
    );
    Ok(Output::ok(&value, summary))
}
