//! Local refinement of a (control direction, time) pair towards an exact hit.
//!
//! Stage one sweeps the coordinates with golden-section line searches, which
//! needs no derivatives and tolerates a poor start. Stage two is a damped
//! Gauss–Newton (Levenberg–Marquardt) polish on the residual `U(t) − O`,
//! with a finite-difference Jacobian; hits are isolated zeros of this
//! residual, so the polish converges quadratically once inside a basin.

use alloc::vec::Vec;

use nalgebra::{Cholesky, DMatrix, DVector};

use super::sampler::{combine, normalize};
use crate::matcore::{exp_from_spectrum, spectral_hermitian, ComplexSquareMatrix};
use crate::Tolerances;

const GOLDEN: f64 = 0.618_033_988_749_894_8;
const LINE_EVALS: usize = 20;
const LM_ITERS: usize = 80;

pub(crate) struct Objective<'a> {
    pub h0: &'a ComplexSquareMatrix,
    pub basis: &'a [ComplexSquareMatrix],
    pub radius: f64,
    pub target: &'a ComplexSquareMatrix,
    pub t_max: f64,
    pub tol: &'a Tolerances,
}

#[derive(Debug, Clone)]
pub(crate) struct Refined {
    pub direction: Vec<f64>,
    pub t: f64,
    pub distance: f64,
    pub iters: usize,
}

impl Objective<'_> {
    fn params(&self) -> usize {
        self.basis.len() + 1
    }

    /// Splits `x = (v, t)`, projecting `v` onto the sphere and `t` into the window.
    fn unpack(&self, x: &[f64]) -> (Vec<f64>, f64) {
        let m = self.basis.len();
        let mut v = x[..m].to_vec();
        normalize(&mut v);
        (v, x[m].clamp(self.t_max * 1e-9, self.t_max))
    }

    pub fn control(&self, direction: &[f64]) -> ComplexSquareMatrix {
        combine(self.basis, direction).scale_real(self.radius)
    }

    fn residual(&self, x: &[f64]) -> Option<Vec<f64>> {
        let (v, t) = self.unpack(x);
        let h = self.h0 + &self.control(&v);
        let spec = spectral_hermitian(&h, self.tol).ok()?;
        let diff = &exp_from_spectrum(&spec, t) - self.target;
        Some(diff.to_row_major().iter().flat_map(|z| [z.re, z.im]).collect())
    }

    fn cost(&self, x: &[f64]) -> f64 {
        self.residual(x)
            .map(|r| r.iter().map(|v| v * v).sum())
            .unwrap_or(f64::INFINITY)
    }

    /// Runs both stages from `start = (direction, t)`.
    pub fn refine(&self, direction: &[f64], t: f64, sweeps: usize, goal: f64) -> Refined {
        let mut x: Vec<f64> = direction.to_vec();
        x.push(t);
        let mut cost = self.cost(&x);
        let mut iters = 0;
        let n = self.params();
        let mut steps: Vec<f64> = (0..n).map(|j| if j + 1 == n { 0.1 * t } else { 0.25 }).collect();

        for it in 0..sweeps {
            if cost <= goal * goal {
                break;
            }
            let j = it % n;
            iters += 1;
            let (xj, cj) = self.line_search(&x, j, steps[j]);
            if cj < cost {
                x[j] = xj;
                cost = cj;
            }
            if j + 1 == n {
                steps.iter_mut().for_each(|s| *s *= 0.7);
                let (v, t) = self.unpack(&x);
                x[..n - 1].copy_from_slice(&v);
                x[n - 1] = t;
            }
        }

        let mut lambda = 1e-3;
        for _ in 0..LM_ITERS {
            if cost <= (goal * 1e-3) * (goal * 1e-3) || lambda > 1e12 {
                break;
            }
            iters += 1;
            let Some(r) = self.residual(&x) else { break };
            let Some(jac) = self.jacobian(&x, &r) else { break };
            let jt = jac.transpose();
            let jtj = &jt * &jac;
            let rhs = -(&jt * DVector::from_vec(r));
            let mut improved = false;
            while lambda <= 1e12 {
                let mut a = jtj.clone();
                for k in 0..n {
                    a[(k, k)] += lambda * (jtj[(k, k)] + 1e-12);
                }
                if let Some(ch) = Cholesky::new(a) {
                    let step = ch.solve(&rhs);
                    let trial: Vec<f64> = x.iter().zip(step.iter()).map(|(a, b)| a + b).collect();
                    let (v, t) = self.unpack(&trial);
                    let mut trial = v;
                    trial.push(t);
                    let c = self.cost(&trial);
                    if c < cost {
                        x = trial;
                        cost = c;
                        lambda = (lambda / 3.0).max(1e-12);
                        improved = true;
                        break;
                    }
                }
                lambda *= 4.0;
            }
            if !improved {
                break;
            }
        }

        let (direction, t) = self.unpack(&x);
        Refined {
            direction,
            t,
            distance: libm::sqrt(cost),
            iters,
        }
    }

    fn line_search(&self, x: &[f64], j: usize, step: f64) -> (f64, f64) {
        let mut probe = x.to_vec();
        let mut f = |v: f64| {
            probe[j] = v;
            self.cost(&probe)
        };
        let (mut a, mut b) = (x[j] - step, x[j] + step);
        let mut c = b - GOLDEN * (b - a);
        let mut d = a + GOLDEN * (b - a);
        let (mut fc, mut fd) = (f(c), f(d));
        for _ in 0..LINE_EVALS {
            if fc < fd {
                b = d;
                d = c;
                fd = fc;
                c = b - GOLDEN * (b - a);
                fc = f(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + GOLDEN * (b - a);
                fd = f(d);
            }
        }
        if fc < fd {
            (c, fc)
        } else {
            (d, fd)
        }
    }

    fn jacobian(&self, x: &[f64], r0: &[f64]) -> Option<DMatrix<f64>> {
        let n = self.params();
        let mut jac = DMatrix::zeros(r0.len(), n);
        let mut probe = x.to_vec();
        for k in 0..n {
            let h = 1e-7 * x[k].abs().max(if k + 1 == n { 1e-2 } else { 1.0 });
            probe[k] = x[k] + h;
            let rp = self.residual(&probe)?;
            probe[k] = x[k] - h;
            let rm = self.residual(&probe)?;
            probe[k] = x[k];
            for (i, (p, m)) in rp.iter().zip(&rm).enumerate() {
                jac[(i, k)] = (p - m) / (2.0 * h);
            }
        }
        Some(jac)
    }
}
