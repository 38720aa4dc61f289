mod common;

use std::f64::consts::PI;

use common::*;
use proptest::prelude::*;
use qsl_core::matcore::trace_product;
use qsl_core::oracle::{combine, control_basis, SphereSampler};
use qsl_core::randers::randers_su_roots;
use qsl_core::*;
use rand::Rng;

fn tol() -> Tolerances {
    Tolerances::default()
}

fn dims() -> impl Strategy<Value = usize> {
    prop_oneof![Just(2usize), Just(4usize)]
}

fn exp_of_log(l: &ComplexSquareMatrix) -> ComplexSquareMatrix {
    expm_hermitian_generator(&l.scale(Complex64::i()), 1.0, &tol()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exp_log_round_trip(seed: u64, dim in 2usize..=5, frac in 0.05f64..0.95) {
        let mut rng = rng(seed);
        let a = traceless_hermitian(&mut rng, dim);
        let radius = a.frobenius_norm();
        let t = frac * PI / radius;
        let u = expm_hermitian_generator(&a, t, &tol()).unwrap();
        let l = logm_special_unitary(&u, &tol()).unwrap();
        let expected = a.scale(Complex64::new(0.0, -t));
        prop_assert!(l.matrix.distance(&expected) < 1e-10);
    }

    #[test]
    fn expm_is_special_unitary(seed: u64, dim in 2usize..=6, t in -5.0f64..5.0) {
        let mut rng = rng(seed);
        let u = expm_hermitian_generator(&traceless_hermitian(&mut rng, dim), t, &tol()).unwrap();
        prop_assert!(u.unitarity_defect() <= 1e-10);
        prop_assert!((u.determinant() - Complex64::new(1.0, 0.0)).norm() <= 1e-9);
    }

    #[test]
    fn every_branch_exponentiates_back(seed: u64, dim in 2usize..=3) {
        let mut rng = rng(seed);
        let o = special_unitary(&mut rng, dim);
        for b in enumerate_log_branches(&o, 1, &tol()).unwrap() {
            prop_assert!(exp_of_log(&b.matrix).distance(&o) < 1e-10);
            prop_assert!(b.matrix.trace().norm() <= 1e-10);
        }
    }

    #[test]
    fn hilbert_schmidt_self_is_sum_of_squares(seed: u64, dim in 1usize..=5) {
        let mut rng = rng(seed);
        let a = ComplexSquareMatrix::from_fn(dim, |_, _| {
            Complex64::new(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0))
        });
        let hs = hilbert_schmidt(&a, &a).unwrap();
        let sum: f64 = a.to_row_major().iter().map(|z| z.norm_sqr()).sum();
        prop_assert_eq!(hs.im, 0.0);
        prop_assert!(hs.re >= 0.0);
        prop_assert!((hs.re - sum).abs() <= 1e-12 * sum.max(1.0));
    }

    #[test]
    fn uniform_superposition_identity(seed: u64, k in 0usize..4) {
        let mut rng = rng(seed);
        let dim = [2, 3, 4, 8][k];
        let (a, b) = uniform_superposition_check(&hermitian(&mut rng, dim), &tol()).unwrap();
        prop_assert!((a - b).abs() <= 1e-10 * a.max(1.0));
    }

    #[test]
    fn pauli_sums_hermitian_traceless(
        terms in prop::collection::vec(("[IXYZ]{3}", -2.0f64..2.0), 1..6),
    ) {
        let strings: Vec<PauliString> =
            terms.iter().map(|(s, c)| PauliString::new(s.clone(), *c)).collect();
        let h = build_pauli(&strings).unwrap();
        prop_assert!(h.hermitian_defect() == 0.0);
        if strings.iter().all(|s| s.letters != "III") {
            prop_assert!(h.trace().norm() <= 1e-12);
        }
    }

    #[test]
    fn clifford_identity(d in prop::array::uniform3(-3.0f64..3.0)) {
        let h = build_pauli(&[
            PauliString::new("X", d[0]),
            PauliString::new("Y", d[1]),
            PauliString::new("Z", d[2]),
        ]).unwrap();
        let expected = 2.0 * d.iter().map(|x| x * x).sum::<f64>();
        prop_assert!((trace_product(&h, &h).re - expected).abs() <= 1e-12 * expected.max(1.0));
    }

    #[test]
    fn valid_problems_have_rho_above_one(seed: u64, dim in dims()) {
        let mut rng = rng(seed);
        let p = problem(&mut rng, dim);
        prop_assert!(validate(&p, &tol()).is_empty());
        prop_assert!(rho(&p).unwrap() > 1.0);
    }

    #[test]
    fn unit_speed(seed: u64, dim in dims()) {
        let mut rng = rng(seed);
        let p = problem(&mut rng, dim);
        let hc = saturating_control(&mut rng, &p);
        let x = (p.h0() + &hc).scale(-Complex64::i());
        let nav = NavigationData::new(p, &tol()).unwrap();
        prop_assert!((randers_norm_general(&nav, &x).unwrap() - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn specialized_norm_matches_general(seed: u64, dim in dims(), scale in 0.01f64..10.0) {
        let mut rng = rng(seed);
        let p = problem(&mut rng, dim);
        let a = traceless_hermitian(&mut rng, dim).scale_real(scale);
        let nav = NavigationData::new(p, &tol()).unwrap();
        let general = randers_norm_general(&nav, &a.scale(Complex64::i())).unwrap();
        let su = randers_norm_su(&nav, &a).unwrap();
        prop_assert!((general - su).abs() <= 1e-10 * general.max(1.0));
        let roots = randers_su_roots(&nav, &a).unwrap();
        prop_assert_eq!(roots.iter().filter(|r| **r >= 0.0).count(), 1);
    }

    #[test]
    fn positive_homogeneity(seed: u64, dim in dims(), c in 1e-3f64..1e3) {
        let mut rng = rng(seed);
        let p = problem(&mut rng, dim);
        let x = traceless_hermitian(&mut rng, dim).scale(Complex64::i());
        let nav = NavigationData::new(p, &tol()).unwrap();
        let f1 = randers_norm_general(&nav, &x).unwrap();
        let fc = randers_norm_general(&nav, &x.scale_real(c)).unwrap();
        prop_assert!((fc - c * f1).abs() <= 1e-10 * (c * f1).max(1.0));
    }

    #[test]
    fn closed_form_equals_budget_quadratic(seed: u64, dim in dims()) {
        let mut rng = rng(seed);
        let p = problem(&mut rng, dim);
        let g = TargetGate::new(special_unitary(&mut rng, dim), &tol()).unwrap();
        let r = t_opt_closed_form(&p, &g, &tol()).unwrap();
        let q = budget_quadratic_root(&p, g.branch()).unwrap();
        prop_assert!(rel(r.t_opt, q) <= 1e-10);
    }

    #[test]
    fn optimum_is_consistent(seed: u64, dim in dims()) {
        let mut rng = rng(seed);
        let p = problem(&mut rng, dim);
        let g = TargetGate::new(special_unitary(&mut rng, dim), &tol()).unwrap();
        let r = t_opt_closed_form(&p, &g, &tol()).unwrap();
        let hc = r.hc_opt.clone().unwrap();
        // budget
        prop_assert!(rel(trace_product(&hc, &hc).re, p.budget()) <= 1e-9);
        // trajectory
        let u = expm_hermitian_generator(&(p.h0() + &hc), r.t_opt, &tol()).unwrap();
        prop_assert!(u.distance(g.o()) <= 1e-8);
        // length
        let nav = NavigationData::new(p.clone(), &tol()).unwrap();
        let schedule = ControlSchedule::new(vec![Segment { hc, duration: r.t_opt }]);
        prop_assert!((curve_length(&nav, &schedule).unwrap() - r.t_opt).abs() <= 1e-8);
        // drift overlap with a logarithm is purely imaginary
        prop_assert!(r.diagnostics.tr_h0_logo.re.abs() <= 1e-10);
    }

    #[test]
    fn more_budget_is_faster(seed: u64, dim in dims()) {
        let mut rng = rng(seed);
        let p = problem(&mut rng, dim);
        let g = TargetGate::new(special_unitary(&mut rng, dim), &tol()).unwrap();
        let t1 = t_opt_closed_form(&p, &g, &tol()).unwrap().t_opt;
        let t2 = t_opt_closed_form(&p.with_budget(2.0 * p.budget()), &g, &tol()).unwrap().t_opt;
        prop_assert!(t2 < t1);
    }

    #[test]
    fn single_spin_drift_direction(
        bmag in 0.01f64..0.9, angle in 0.05f64..(PI - 0.05), d in 0.5f64..3.0,
    ) {
        // target exp(−i(π/2)σy): a drift along +σy helps, along −σy opposes
        let (bx, by) = (bmag * d * angle.cos(), bmag * d * angle.sin());
        let with = Preset::SingleSpin { bx, by, d }.build(&tol()).unwrap();
        let against = Preset::SingleSpin { bx, by: -by, d }.build(&tol()).unwrap();
        let r_with = t_opt_closed_form(&with.0, &with.1, &tol()).unwrap();
        let r_against = t_opt_closed_form(&against.0, &against.1, &tol()).unwrap();
        prop_assert_eq!(r_with.root_sign, -1);
        prop_assert_eq!(r_against.root_sign, 1);
        prop_assert!(r_with.t_opt < r_against.t_opt);
        // the reversed target swaps the roles exactly
        let rev = t_opt_closed_form(&with.0, &with.1.reversed(), &tol()).unwrap();
        prop_assert!(rel(rev.t_opt, r_against.t_opt) <= 1e-12);
    }

    #[test]
    fn sampled_controls_lie_on_budget_sphere(seed: u64, dim in 2usize..=4, budget in 1e-3f64..1e3) {
        let basis = control_basis(dim);
        let sampler = SphereSampler::new(basis.len(), seed);
        for i in 0..20 {
            let hc = combine(&basis, &sampler.direction(i)).scale_real(budget.sqrt());
            prop_assert!(rel(trace_product(&hc, &hc).re, budget) <= 1e-12);
            prop_assert!(hc.trace().norm() <= 1e-12 * budget.sqrt());
        }
    }
}

#[test]
fn first_hit_recovers_optimal_time() {
    let mut rng = rng(5150);
    for _ in 0..50 {
        let p = problem(&mut rng, 2);
        let g = TargetGate::new(special_unitary(&mut rng, 2), &tol()).unwrap();
        let r = t_opt_closed_form(&p, &g, &tol()).unwrap();
        let h = p.h0() + r.hc_opt.as_ref().unwrap();
        let hit = first_hit_time(&h, g.o(), 2.0 * r.t_opt, 1e-6, &tol()).unwrap().unwrap();
        assert!(rel(hit, r.t_opt) <= 1e-6, "{hit} vs {}", r.t_opt);
    }
}

#[test]
fn search_never_beats_the_formula() {
    let mut rng = rng(77);
    for _ in 0..6 {
        let p = problem(&mut rng, 2);
        let o = special_unitary(&mut rng, 2);
        let floor = t_opt_over_branches(&p, &o, 3, &tol())
            .unwrap()
            .iter()
            .map(|r| r.t_opt)
            .filter(|&t| t > 0.0)
            .fold(f64::INFINITY, f64::min);
        let rep = brute_force_min_time(&p, &o, &SearchConfig::default(), &tol()).unwrap();
        assert!(rep.success);
        assert!(rep.best_time >= (1.0 - 1e-6) * floor, "{} < {floor}", rep.best_time);
        assert!(rel(rep.best_time, floor) < 0.01, "{} vs {floor}", rep.best_time);
        assert!(rel(trace_product(&rep.best_control, &rep.best_control).re, p.budget()) <= 1e-12);
    }
}

#[test]
fn search_is_deterministic() {
    let (p, g) = Preset::SingleSpin { bx: 0.2, by: -0.1, d: 0.8 }.build(&tol()).unwrap();
    let cfg = SearchConfig { seed: 3, samples: Some(500), ..SearchConfig::default() };
    let a = brute_force_min_time(&p, g.o(), &cfg, &tol()).unwrap();
    let b = brute_force_min_time(&p, g.o(), &cfg, &tol()).unwrap();
    assert_eq!(a, b);
}
