//! Independent checks by direct propagation.
//!
//! Nothing here uses the Randers norm or the closed form: [`propagate`]
//! exponentiates a Hamiltonian, [`first_hit_time`] scans a trajectory for
//! the first time it meets a target, and [`brute_force_min_time`] searches
//! the sphere `Tr(Hc²) = budget` of constant controls for the earliest hit.
//! The closed form is consulted only to size the time window.
//!
//! The search samples control directions quasi-randomly, records every dip
//! of `‖exp(−iHt) − O‖` along each trajectory, and polishes the deepest dips
//! into exact hits with [`refine`]. Exact hits are isolated points of the
//! (direction, time) space, so sampling alone never lands on one.

mod refine;
mod sampler;

use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_complex::Complex64;

pub use sampler::{combine, control_basis, SphereSampler};

use crate::hamiltonians::{require_valid, ControlProblem};
use crate::matcore::{
    exp_from_spectrum, spectral_hermitian, ComplexSquareMatrix, SpectralDecomposition, I, ONE,
};
use crate::qsl::t_opt_over_branches;
use crate::{Error, Result, Tolerances};
use refine::Objective;

/// Default number of time samples in the coarse scan of a trajectory.
pub const DEFAULT_SCAN_POINTS: usize = 4096;

/// Frobenius distance between two matrices of the same size.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct GateDistance(f64);

impl GateDistance {
    pub fn between(a: &ComplexSquareMatrix, b: &ComplexSquareMatrix) -> Result<Self> {
        a.check_dim(b)?;
        Ok(Self(a.distance(b)))
    }

    /// Smallest distance from `u` to `ω^k·o` over the `N`-th roots of unity.
    pub fn modulo_center(u: &ComplexSquareMatrix, o: &ComplexSquareMatrix) -> Result<Self> {
        u.check_dim(o)?;
        let best = center_targets(o, true)
            .iter()
            .map(|c| u.distance(c))
            .fold(f64::INFINITY, f64::min);
        Ok(Self(best))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// `exp(−iHt)`.
pub fn propagate(h: &ComplexSquareMatrix, t: f64, tol: &Tolerances) -> Result<ComplexSquareMatrix> {
    let spec = spectral_hermitian(h, tol)?;
    Ok(exp_from_spectrum(&spec, t))
}

/// Smallest `t ∈ (0, t_max]` where `exp(−iHt)` comes within `dist_tol` of `o`.
///
/// The trajectory is scanned at [`DEFAULT_SCAN_POINTS`] evenly spaced times;
/// each local minimum of the distance, in time order, is located exactly by
/// bisection on the derivative of the squared distance. The returned time is
/// the point of closest approach inside the first dip that reaches
/// `dist_tol`.
pub fn first_hit_time(
    h: &ComplexSquareMatrix,
    o: &ComplexSquareMatrix,
    t_max: f64,
    dist_tol: f64,
    tol: &Tolerances,
) -> Result<Option<f64>> {
    first_hit_time_with(h, o, t_max, dist_tol, DEFAULT_SCAN_POINTS, false, tol)
}

/// [`first_hit_time`] with an explicit scan resolution, optionally accepting
/// any `ω^k·o` (the target modulo the center of SU(N)).
pub fn first_hit_time_with(
    h: &ComplexSquareMatrix,
    o: &ComplexSquareMatrix,
    t_max: f64,
    dist_tol: f64,
    scan_points: usize,
    quotient_center: bool,
    tol: &Tolerances,
) -> Result<Option<f64>> {
    if !(t_max > 0.0) || !t_max.is_finite() {
        return Err(Error::BadTimeWindow(t_max));
    }
    h.check_dim(o)?;
    require_special_unitary(o, tol)?;
    let spec = spectral_hermitian(h, tol)?;
    let targets = center_targets(o, quotient_center);
    let evo = Evolution::new(&spec, &targets);
    for dip in evo.dips(t_max, scan_points.max(2)) {
        if dip.sq_dist > dist_tol * dist_tol + 1e-10 {
            continue;
        }
        let u = exp_from_spectrum(&spec, dip.t);
        if u.distance(&targets[dip.center]) <= dist_tol {
            return Ok(Some(dip.t));
        }
    }
    Ok(None)
}

fn require_special_unitary(o: &ComplexSquareMatrix, tol: &Tolerances) -> Result<()> {
    let defect = o.unitarity_defect();
    if defect > tol.spec {
        return Err(Error::NotUnitary(defect));
    }
    let det = (o.determinant() - ONE).norm();
    if det > tol.spec {
        return Err(Error::NotSpecial(det));
    }
    Ok(())
}

fn center_targets(o: &ComplexSquareMatrix, quotient: bool) -> Vec<ComplexSquareMatrix> {
    let n = o.dim();
    if !quotient {
        return alloc::vec![o.clone()];
    }
    (0..n)
        .map(|k| o.scale(Complex64::from_polar(1.0, TAU * k as f64 / n as f64)))
        .collect()
}

#[derive(Debug, Clone, Copy)]
struct Dip {
    t: f64,
    sq_dist: f64,
    center: usize,
}

/// `Tr(O_c†·exp(−iHt)) = Σ_n w_{c,n}·e^{−iE_n t}` in the eigenbasis of `H`,
/// so `‖exp(−iHt) − O_c‖² = 2N − 2·Re Tr(O_c†·exp(−iHt))` costs `O(N)` per time.
struct Evolution {
    energies: Vec<f64>,
    weights: Vec<Vec<Complex64>>,
    dim: f64,
}

impl Evolution {
    fn new(spec: &SpectralDecomposition, targets: &[ComplexSquareMatrix]) -> Self {
        let v = spec.eigenvectors.as_matrix();
        let n = spec.dim();
        let weights = targets
            .iter()
            .map(|o| {
                let m = v.adjoint() * o.as_matrix().adjoint() * v;
                (0..n).map(|k| m[(k, k)]).collect()
            })
            .collect();
        Self {
            energies: spec.real_eigenvalues(),
            weights,
            dim: n as f64,
        }
    }

    fn sq_dist(&self, c: usize, t: f64) -> f64 {
        let z: Complex64 = self.weights[c]
            .iter()
            .zip(&self.energies)
            .map(|(w, e)| w * (-I * e * t).exp())
            .sum();
        2.0 * self.dim - 2.0 * z.re
    }

    fn slope(&self, c: usize, t: f64) -> f64 {
        let z: Complex64 = self.weights[c]
            .iter()
            .zip(&self.energies)
            .map(|(w, e)| w * (-I * e) * (-I * e * t).exp())
            .sum();
        -2.0 * z.re
    }

    /// Local minima of the squared distance over `(0, t_max]`, in time order,
    /// each refined to the exact minimizer. Falls back to the scan's global
    /// minimum when the distance has no interior dip.
    fn dips(&self, t_max: f64, points: usize) -> Vec<Dip> {
        let dt = t_max / points as f64;
        let mut out = Vec::new();
        for c in 0..self.weights.len() {
            let steps: Vec<Complex64> = self.energies.iter().map(|e| (-I * e * dt).exp()).collect();
            let mut phase: Vec<Complex64> = alloc::vec![ONE; self.energies.len()];
            let mut g = Vec::with_capacity(points + 1);
            for k in 0..=points {
                if k > 0 && k % 256 == 0 {
                    let t = k as f64 * dt;
                    for (p, e) in phase.iter_mut().zip(&self.energies) {
                        *p = (-I * e * t).exp();
                    }
                }
                let z: Complex64 = self.weights[c].iter().zip(&phase).map(|(w, p)| w * p).sum();
                g.push(2.0 * self.dim - 2.0 * z.re);
                for (p, s) in phase.iter_mut().zip(&steps) {
                    *p *= s;
                }
            }
            let mut found = false;
            for k in 1..=points {
                let left = g[k] < g[k - 1];
                let right = k == points || g[k] <= g[k + 1];
                if left && right {
                    found = true;
                    let hi = if k == points { t_max } else { (k + 1) as f64 * dt };
                    out.push(self.polish(c, (k - 1) as f64 * dt, hi, k as f64 * dt, t_max));
                }
            }
            if !found {
                let k = (1..=points).min_by(|&a, &b| g[a].total_cmp(&g[b])).unwrap_or(points);
                out.push(Dip {
                    t: k as f64 * dt,
                    sq_dist: g[k],
                    center: c,
                });
            }
        }
        out.sort_by(|a, b| a.t.total_cmp(&b.t));
        out
    }

    fn polish(&self, c: usize, lo: f64, hi: f64, guess: f64, t_max: f64) -> Dip {
        let (mut a, mut b) = (lo.max(t_max * 1e-12), hi);
        let t = if self.slope(c, a) < 0.0 && self.slope(c, b) > 0.0 {
            for _ in 0..80 {
                let mid = 0.5 * (a + b);
                if self.slope(c, mid) < 0.0 {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            0.5 * (a + b)
        } else if guess >= t_max && self.slope(c, t_max) <= 0.0 {
            t_max
        } else {
            guess
        };
        Dip {
            t,
            sq_dist: self.sq_dist(c, t).max(0.0),
            center: c,
        }
    }
}

/// Parameters of [`brute_force_min_time`].
#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    /// Sampled directions; `None` picks 2000 for N = 2, 8000 for N = 3,
    /// 20000 for N = 4.
    pub samples: Option<usize>,
    /// The time window is `t_max_factor ×` the smallest positive closed-form time.
    pub t_max_factor: f64,
    /// Golden-section line searches per refined seed.
    pub refine_iters: usize,
    pub seed: u64,
    pub dist_tol: f64,
    pub quotient_center: bool,
    pub scan_points: usize,
    pub max_dim: usize,
    /// Branch range used to size the time window.
    pub branch_max_shift: u32,
    /// Dips refined into hits; `None` picks 16 for N = 2 and 48 otherwise.
    pub refine_seeds: Option<usize>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            samples: None,
            t_max_factor: 3.0,
            refine_iters: 200,
            seed: 0,
            dist_tol: 1e-6,
            quotient_center: false,
            scan_points: DEFAULT_SCAN_POINTS,
            max_dim: 4,
            branch_max_shift: 1,
            refine_seeds: None,
        }
    }
}

impl SearchConfig {
    pub fn samples_for(&self, dim: usize) -> usize {
        self.samples.unwrap_or(match dim {
            0..=2 => 2000,
            3 => 8000,
            _ => 20000,
        })
    }

    pub fn seeds_for(&self, dim: usize) -> usize {
        self.refine_seeds.unwrap_or(if dim <= 2 { 16 } else { 48 })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchReport {
    /// Earliest hit found, or the time of the closest approach if no
    /// candidate reached `dist_tol`.
    pub best_time: f64,
    pub best_control: ComplexSquareMatrix,
    pub best_distance: f64,
    pub samples_evaluated: usize,
    pub refinement_iters: usize,
    /// `best_distance ≤ dist_tol`.
    pub success: bool,
    pub t_max: f64,
    /// Distinct hit times from all refined seeds, ascending.
    pub hit_times: Vec<f64>,
}

const TIME_BINS: usize = 8;

/// Deepest dips first, taken round-robin from equal slices of the time
/// window so that short-time hits are not crowded out by the many deep dips
/// late trajectories accumulate.
fn pick_seeds(per_sample: &[Vec<Dip>], t_max: f64, count: usize) -> Vec<(usize, Dip)> {
    let mut bins: Vec<Vec<(usize, Dip)>> = alloc::vec![Vec::new(); TIME_BINS];
    for (i, dips) in per_sample.iter().enumerate() {
        for d in dips {
            let b = ((d.t / t_max * TIME_BINS as f64) as usize).min(TIME_BINS - 1);
            bins[b].push((i, *d));
        }
    }
    for bin in &mut bins {
        bin.sort_by(|a, b| {
            a.1.sq_dist
                .total_cmp(&b.1.sq_dist)
                .then(a.0.cmp(&b.0))
                .then(a.1.t.total_cmp(&b.1.t))
        });
    }
    let mut out = Vec::with_capacity(count);
    let mut rank = 0;
    while out.len() < count && bins.iter().any(|b| rank < b.len()) {
        for bin in &bins {
            if out.len() < count && rank < bin.len() {
                out.push(bin[rank]);
            }
        }
        rank += 1;
    }
    out
}

#[cfg(feature = "std")]
fn par_map<T: Send>(n: usize, f: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "std"))]
fn par_map<T>(n: usize, f: impl Fn(usize) -> T) -> Vec<T> {
    (0..n).map(f).collect()
}

/// Searches constant controls on the budget sphere for the earliest time at
/// which `exp(−i(H0 + Hc)t)` reaches `o`.
///
/// Results are identical for a given configuration regardless of thread
/// count: candidates are evaluated independently and combined in index
/// order.
pub fn brute_force_min_time(
    p: &ControlProblem,
    o: &ComplexSquareMatrix,
    cfg: &SearchConfig,
    tol: &Tolerances,
) -> Result<SearchReport> {
    require_valid(p, tol)?;
    let dim = p.dim();
    if dim < 2 || dim > cfg.max_dim {
        return Err(Error::DimensionGuard {
            dim,
            max: cfg.max_dim,
        });
    }
    p.h0().check_dim(o)?;
    require_special_unitary(o, tol)?;
    let targets = center_targets(o, cfg.quotient_center);

    let mut shortest = f64::INFINITY;
    for target in &targets {
        for r in t_opt_over_branches(p, target, cfg.branch_max_shift, tol)? {
            if r.t_opt > 0.0 {
                shortest = shortest.min(r.t_opt);
            }
        }
    }
    if !shortest.is_finite() {
        return Err(Error::NoPositiveRoot);
    }
    let t_max = cfg.t_max_factor * shortest;
    if !(t_max > 0.0) || !t_max.is_finite() {
        return Err(Error::BadTimeWindow(t_max));
    }

    let basis = control_basis(dim);
    let radius = libm::sqrt(p.budget());
    let sampler = SphereSampler::new(basis.len(), cfg.seed);
    let samples = cfg.samples_for(dim);
    let scan = cfg.scan_points.max(2);

    let per_sample: Vec<Vec<Dip>> = par_map(samples, |i| {
        let u = sampler.direction(i);
        let h = p.h0() + &combine(&basis, &u).scale_real(radius);
        match spectral_hermitian(&h, tol) {
            Ok(spec) => Evolution::new(&spec, &targets).dips(t_max, scan),
            Err(_) => Vec::new(),
        }
    });

    let ranked = pick_seeds(&per_sample, t_max, cfg.seeds_for(dim).max(1));

    let refined: Vec<(refine::Refined, usize)> = par_map(ranked.len(), |k| {
        let (i, dip) = ranked[k];
        let obj = Objective {
            h0: p.h0(),
            basis: &basis,
            radius,
            target: &targets[dip.center],
            t_max,
            tol,
        };
        (
            obj.refine(&sampler.direction(i), dip.t, cfg.refine_iters, cfg.dist_tol),
            dip.center,
        )
    });

    let refinement_iters = refined.iter().map(|(r, _)| r.iters).sum();
    let control_of = |r: &refine::Refined| combine(&basis, &r.direction).scale_real(radius);

    let mut hits: Vec<(f64, f64, ComplexSquareMatrix)> = Vec::new();
    for (r, center) in &refined {
        if r.distance > cfg.dist_tol {
            continue;
        }
        let hc = control_of(r);
        let h = p.h0() + &hc;
        let mut t = r.t;
        let mut distance = r.distance;
        if let Some(first) =
            first_hit_time_with(&h, &targets[*center], t_max, cfg.dist_tol, scan, false, tol)?
        {
            if first < t {
                t = first;
                distance = propagate(&h, t, tol)?.distance(&targets[*center]);
            }
        }
        hits.push((t, distance, hc));
    }

    let mut hit_times: Vec<f64> = hits.iter().map(|h| h.0).collect();
    hit_times.sort_by(f64::total_cmp);
    hit_times.dedup_by(|a, b| (*a - *b).abs() <= 1e-9 * b.abs().max(1.0));

    let report = match hits.into_iter().min_by(|a, b| a.0.total_cmp(&b.0)) {
        Some((t, distance, hc)) => SearchReport {
            best_time: t,
            best_control: hc,
            best_distance: distance,
            samples_evaluated: samples,
            refinement_iters,
            success: true,
            t_max,
            hit_times,
        },
        None => {
            let (r, _) = refined
                .iter()
                .min_by(|a, b| a.0.distance.total_cmp(&b.0.distance))
                .ok_or(Error::NoPositiveRoot)?;
            SearchReport {
                best_time: r.t,
                best_control: control_of(r),
                best_distance: r.distance,
                samples_evaluated: samples,
                refinement_iters,
                success: false,
                t_max,
                hit_times,
            }
        }
    };
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::test_util::*;
    use crate::qsl::{t_opt_closed_form, Preset};
    use core::f64::consts::PI;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn propagate_examples() {
        let u = propagate(&sigma_z(), PI / 2.0, &tol()).unwrap();
        assert!(u.distance(&sigma_z().scale(-I)) < 1e-14);
        let u = propagate(&sigma_z(), PI, &tol()).unwrap();
        assert!(u.distance(&ComplexSquareMatrix::identity(2).scale_real(-1.0)) < 1e-14);
        let u = propagate(&sigma_x().scale_real(3.7), 0.0, &tol()).unwrap();
        assert!(u.distance(&ComplexSquareMatrix::identity(2)) < 1e-15);
        assert!(matches!(
            propagate(&sigma_z().scale(I), 1.0, &tol()),
            Err(Error::NotHermitian(_))
        ));
    }

    #[test]
    fn first_hit_on_optimal_control() {
        let (p, g) = Preset::SingleSpin { bx: 0.0, by: 0.3, d: 1.0 }.build(&tol()).unwrap();
        let r = t_opt_closed_form(&p, &g, &tol()).unwrap();
        let h = p.h0() + r.hc_opt.as_ref().unwrap();
        let hit = first_hit_time(&h, g.o(), 2.0 * r.t_opt, 1e-6, &tol()).unwrap().unwrap();
        assert!((hit - 5.0 * PI / 13.0).abs() < 1e-9);
        let u = propagate(&h, r.t_opt, &tol()).unwrap();
        assert!(u.distance(g.o()) < 1e-12);
    }

    #[test]
    fn first_hit_none_and_recurrence() {
        // σz never reaches the quarter turn about y
        let o = ComplexSquareMatrix::from_rows(&[[ZERO_, -ONE], [ONE, ZERO_]]).unwrap();
        assert_eq!(first_hit_time(&sigma_z(), &o, 50.0, 1e-6, &tol()).unwrap(), None);
        // exp(−iσz t) returns to I at t = 2π, not at t = 0
        let id = ComplexSquareMatrix::identity(2);
        let t = first_hit_time(&sigma_z(), &id, 7.0, 1e-6, &tol()).unwrap().unwrap();
        assert!((t - 2.0 * PI).abs() < 1e-9);
        assert_eq!(first_hit_time(&sigma_z(), &id, 6.0, 1e-6, &tol()).unwrap(), None);
        assert!(matches!(
            first_hit_time(&sigma_z(), &id, 0.0, 1e-6, &tol()),
            Err(Error::BadTimeWindow(_))
        ));
    }

    #[test]
    fn quotient_center_accepts_minus_identity() {
        let id = ComplexSquareMatrix::identity(2);
        // exp(−iσz π) = −I, which equals I modulo the center
        let t = first_hit_time_with(&sigma_z(), &id, 4.0, 1e-6, 4096, true, &tol()).unwrap();
        assert!((t.unwrap() - PI).abs() < 1e-9);
        let minus = id.scale_real(-1.0);
        assert!(GateDistance::modulo_center(&minus, &id).unwrap().value() < 1e-15);
        assert!((GateDistance::between(&minus, &id).unwrap().value() - 8f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn single_spin_search() {
        let (p, g) = Preset::SingleSpin { bx: 0.0, by: 0.3, d: 1.0 }.build(&tol()).unwrap();
        let rep = brute_force_min_time(&p, g.o(), &SearchConfig::default(), &tol()).unwrap();
        assert!(rep.success);
        assert!((rep.best_time - 5.0 * PI / 13.0).abs() < 1e-6);
        assert!(rep.best_control.distance(&sigma_y()) < 1e-4);
        assert!(((trace(&rep.best_control) - 2.0) / 2.0).abs() < 1e-12);
    }

    fn trace(hc: &ComplexSquareMatrix) -> f64 {
        crate::matcore::trace_product(hc, hc).re
    }

    #[test]
    fn dimension_guard() {
        let h0 = ComplexSquareMatrix::from_diagonal(&[c(0.1, 0.0), c(-0.1, 0.0)]);
        let p = ControlProblem::new(h0, 1.0);
        let cfg = SearchConfig {
            max_dim: 1,
            ..SearchConfig::default()
        };
        let id = ComplexSquareMatrix::identity(2);
        assert!(matches!(
            brute_force_min_time(&p, &id, &cfg, &tol()),
            Err(Error::DimensionGuard { dim: 2, max: 1 })
        ));
    }

    const ZERO_: Complex64 = Complex64::new(0.0, 0.0);
}
