mod common;

use std::f64::consts::PI;

use common::*;
use qsl_core::*;

fn tol() -> Tolerances {
    Tolerances::default()
}

#[test]
fn specialized_norm_of_optimal_tangent_gives_optimal_time() {
    let (p, g) = Preset::SingleSpin { bx: 0.1, by: -0.4, d: 1.3 }.build(&tol()).unwrap();
    let r = t_opt_closed_form(&p, &g, &tol()).unwrap();
    let nav = NavigationData::new(p, &tol()).unwrap();
    // U_t = exp(tL/T) has tangent (L/T)·U = i·A·U with A = −iL/T
    let a = g.branch().matrix.scale(Complex64::new(0.0, -1.0 / r.t_opt));
    let per_unit_time = randers_norm_su(&nav, &a).unwrap();
    assert!(rel(per_unit_time * r.t_opt, r.t_opt) < 1e-12);
    assert!(rel(randers_norm_su(&nav, &a.scale_real(r.t_opt)).unwrap(), r.t_opt) < 1e-12);
}

#[test]
fn saturating_three_segment_schedule() {
    let mut rng = rng(9);
    let p = problem(&mut rng, 2);
    let segments = [0.2, 0.5, 0.8]
        .iter()
        .map(|&duration| Segment { hc: saturating_control(&mut rng, &p), duration })
        .collect();
    let nav = NavigationData::new(p, &tol()).unwrap();
    let length = curve_length(&nav, &ControlSchedule::new(segments)).unwrap();
    assert!((length - 1.5).abs() < 1e-8);
}

#[test]
fn constant_segment_length_is_duration_times_norm() {
    let (p, _) = Preset::SwapChain { lambda: [0.5, 0.2, -0.3], alpha: 0.3 }.build(&tol()).unwrap();
    let mut rng = rng(11);
    // off the budget sphere: integrand constant but not one
    let hc = with_square_trace(&traceless_hermitian(&mut rng, 4), 0.5 * p.budget());
    let x = (p.h0() + &hc).scale(Complex64::new(0.0, -1.0));
    let nav = NavigationData::new(p, &tol()).unwrap();
    let rate = randers_norm_general(&nav, &x).unwrap();
    let schedule = ControlSchedule::new(vec![Segment { hc, duration: 0.7 }]).relaxed();
    assert!((curve_length(&nav, &schedule).unwrap() - 0.7 * rate).abs() < 1e-10);
    assert!((rate - 1.0).abs() > 1e-3);
}

#[test]
fn swap_closed_form_on_both_orientations() {
    for (lambda, alpha) in [([1.0, 1.0, 1.0], 1.0 / 24.0), ([0.3, -0.8, 1.1], 0.05)] {
        let (p, g) = Preset::SwapChain { lambda, alpha }.build(&tol()).unwrap();
        let s: f64 = lambda.iter().sum();
        let l2: f64 = lambda.iter().map(|x| x * x).sum();
        let adjoint_form = |s: f64| {
            let pre = -PI * alpha * s / (1.0 - 4.0 * alpha * l2);
            let root = (1.0 + 3.0 * (1.0 - 4.0 * alpha * l2) / (4.0 * alpha * s * s)).sqrt();
            if pre * (1.0 + root) > 0.0 { pre * (1.0 + root) } else { pre * (1.0 - root) }
        };
        let fwd = t_opt_closed_form(&p, &g, &tol()).unwrap().t_opt;
        let rev = t_opt_closed_form(&p, &g.reversed(), &tol()).unwrap().t_opt;
        assert!(rel(rev, adjoint_form(s)) < 1e-12);
        assert!(rel(fwd, adjoint_form(-s)) < 1e-12);
        let single = t_opt_over_branches(&p, g.o(), 0, &tol()).unwrap();
        assert_eq!(single.len(), 1);
        assert!(rel(single[0].t_opt, fwd) < 1e-15);
    }
}

#[test]
fn swap_center_quotient_finds_the_reversed_time() {
    // O† = ω³·O with ω = i, so modulo the center both targets coincide
    let (p, g) = Preset::SwapChain { lambda: [1.0; 3], alpha: 1.0 / 24.0 }.build(&tol()).unwrap();
    let o = g.o();
    assert!(o.adjoint().distance(&o.scale(Complex64::new(0.0, -1.0))) < 1e-15);
    let cfg = SearchConfig { quotient_center: true, ..SearchConfig::default() };
    let rep = brute_force_min_time(&p, o, &cfg, &tol()).unwrap();
    assert!(rep.success);
    assert!(rel(rep.best_time, PI * (2f64.sqrt() - 1.0) / 4.0) < 1e-6);
}
