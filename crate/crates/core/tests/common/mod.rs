#![allow(dead_code)]

use qsl_core::matcore::trace_product;
use qsl_core::{expm_hermitian_generator, Complex64, ComplexSquareMatrix, ControlProblem, Tolerances};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn tr2(a: &ComplexSquareMatrix, b: &ComplexSquareMatrix) -> Complex64 {
    trace_product(a, b)
}

/// Random Hermitian matrix with entries of order one.
pub fn hermitian(rng: &mut StdRng, dim: usize) -> ComplexSquareMatrix {
    let raw = ComplexSquareMatrix::from_fn(dim, |_, _| {
        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    });
    raw.hermitian_part()
}

pub fn traceless_hermitian(rng: &mut StdRng, dim: usize) -> ComplexSquareMatrix {
    hermitian(rng, dim).traceless_part()
}

/// `h` rescaled so that `Tr(h²) = target`.
pub fn with_square_trace(h: &ComplexSquareMatrix, target: f64) -> ComplexSquareMatrix {
    let now = tr2(h, h).re;
    h.scale_real((target / now).sqrt())
}

/// Special unitary `exp(−iG)` for a random traceless Hermitian `G`.
pub fn special_unitary(rng: &mut StdRng, dim: usize) -> ComplexSquareMatrix {
    let g = traceless_hermitian(rng, dim);
    expm_hermitian_generator(&g, rng.random_range(0.2..2.0), &Tolerances::default()).unwrap()
}

/// Valid problem: random drift, budget between 1.05× and 50× `Tr(H0²)`.
pub fn problem(rng: &mut StdRng, dim: usize) -> ControlProblem {
    let h0 = traceless_hermitian(rng, dim).scale_real(rng.random_range(0.1..1.5));
    let budget = tr2(&h0, &h0).re * (1.0 + rng.random_range(0.05f64..49.0));
    ControlProblem::new(h0, budget)
}

/// A control on the budget sphere of `p`.
pub fn saturating_control(rng: &mut StdRng, p: &ControlProblem) -> ComplexSquareMatrix {
    with_square_trace(&traceless_hermitian(rng, p.dim()), p.budget())
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}
