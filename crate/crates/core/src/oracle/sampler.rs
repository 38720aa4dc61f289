//! Quasi-random directions on the sphere of admissible controls.

use alloc::vec::Vec;

use num_complex::Complex64;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::matcore::{ComplexSquareMatrix, I, ONE, ZERO};

const PRIMES: [u32; 20] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71,
];

/// Hilbert–Schmidt orthonormal basis of traceless Hermitian `dim × dim`
/// matrices (generalized Gell-Mann, normalized to `Tr(B_k·B_l) = δ_kl`).
pub fn control_basis(dim: usize) -> Vec<ComplexSquareMatrix> {
    let h = libm::sqrt(0.5);
    let mut out = Vec::with_capacity(dim * dim - 1);
    for j in 0..dim {
        for k in j + 1..dim {
            out.push(ComplexSquareMatrix::from_fn(dim, |r, c| {
                if (r, c) == (j, k) || (r, c) == (k, j) {
                    ONE * h
                } else {
                    ZERO
                }
            }));
            out.push(ComplexSquareMatrix::from_fn(dim, |r, c| {
                if (r, c) == (j, k) {
                    -I * h
                } else if (r, c) == (k, j) {
                    I * h
                } else {
                    ZERO
                }
            }));
        }
    }
    for l in 1..dim {
        let norm = libm::sqrt((l * (l + 1)) as f64);
        let diag: Vec<Complex64> = (0..dim)
            .map(|r| match r {
                r if r < l => ONE / norm,
                r if r == l => -ONE * (l as f64) / norm,
                _ => ZERO,
            })
            .collect();
        out.push(ComplexSquareMatrix::from_diagonal(&diag));
    }
    out
}

/// `Σ c_k·B_k` over [`control_basis`].
pub fn combine(basis: &[ComplexSquareMatrix], coeffs: &[f64]) -> ComplexSquareMatrix {
    let dim = basis[0].dim();
    let mut acc = ComplexSquareMatrix::zeros(dim);
    for (b, &c) in basis.iter().zip(coeffs) {
        acc = &acc + &b.scale_real(c);
    }
    acc
}

/// Halton points with a seeded Cranley–Patterson rotation, pushed through
/// Box–Muller and normalized onto the unit sphere in `ambient` dimensions.
#[derive(Debug, Clone)]
pub struct SphereSampler {
    ambient: usize,
    shift: Vec<f64>,
}

impl SphereSampler {
    /// `ambient` is the number of coordinates (at most 20).
    pub fn new(ambient: usize, seed: u64) -> Self {
        assert!(ambient >= 1 && ambient <= PRIMES.len());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let uniforms = ambient + ambient % 2;
        let shift = (0..uniforms)
            .map(|_| (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64))
            .collect();
        Self { ambient, shift }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    /// Unit vector number `index`.
    pub fn direction(&self, index: usize) -> Vec<f64> {
        let n = index as u64 + 1;
        let u: Vec<f64> = self
            .shift
            .iter()
            .zip(PRIMES)
            .map(|(&s, p)| {
                let x = radical_inverse(n, p as u64) + s;
                x - libm::floor(x)
            })
            .collect();
        let mut g = Vec::with_capacity(u.len());
        for pair in u.chunks(2) {
            let r = libm::sqrt(-2.0 * libm::log(1.0 - pair[0]));
            let phi = core::f64::consts::TAU * pair[1];
            g.push(r * libm::cos(phi));
            g.push(r * libm::sin(phi));
        }
        g.truncate(self.ambient);
        normalize(&mut g);
        g
    }
}

pub(crate) fn normalize(v: &mut [f64]) {
    let norm = libm::sqrt(v.iter().map(|x| x * x).sum());
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    } else {
        v[0] = 1.0;
    }
}

fn radical_inverse(mut n: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut out = 0.0;
    while n > 0 {
        out += (n % base) as f64 * f;
        n /= base;
        f *= inv;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::trace_product;

    #[test]
    fn basis_orthonormal_traceless_hermitian() {
        for dim in 2..=4 {
            let b = control_basis(dim);
            assert_eq!(b.len(), dim * dim - 1);
            for (i, x) in b.iter().enumerate() {
                assert!(x.is_hermitian(1e-15));
                assert!(x.trace().norm() < 1e-15);
                for (j, y) in b.iter().enumerate() {
                    let expected = if i == j { 1.0 } else { 0.0 };
                    assert!((trace_product(x, y) - expected).norm() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn directions_unit_and_deterministic() {
        let s = SphereSampler::new(15, 7);
        let again = SphereSampler::new(15, 7);
        for i in 0..100 {
            let d = s.direction(i);
            assert_eq!(d, again.direction(i));
            let n: f64 = d.iter().map(|x| x * x).sum();
            assert!((n - 1.0).abs() < 1e-14);
        }
        assert_ne!(SphereSampler::new(15, 8).direction(0), s.direction(0));
    }

    #[test]
    fn halton_base_two() {
        assert_eq!(radical_inverse(1, 2), 0.5);
        assert_eq!(radical_inverse(3, 2), 0.75);
        assert_eq!(radical_inverse(4, 2), 0.125);
    }

    #[test]
    fn directions_cover_both_hemispheres() {
        let s = SphereSampler::new(3, 0);
        let up = (0..400).filter(|&i| s.direction(i)[2] > 0.0).count();
        assert!((150..250).contains(&up));
    }
}
