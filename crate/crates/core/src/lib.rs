//! Exact quantum speed limits for driven finite-dimensional systems.
//!
//! A closed system evolves as `dU/dt = -i (H0 + Hc(t)) U`, where the drift
//! `H0` is fixed and the control `Hc` is free up to a Hilbert–Schmidt budget
//! `Tr(Hc²) = 1/α`. When the budget dominates the drift, the minimum time to
//! steer `U` along any curve on SU(N) equals the curve's length under a
//! right-invariant Randers metric (Zermelo navigation with the drift as
//! wind). For constant controls this gives a closed-form optimal time.
//!
//! Modules:
//!
//! - [`matcore`]: dense complex matrices, spectral decompositions, `exp`, and
//!   traceless logarithms of special-unitary matrices.
//! - [`hamiltonians`]: Pauli strings, drift/control problems, validation.
//! - [`randers`]: the navigation norm and curve lengths.
//! - [`qsl`]: closed-form optimal times, branch enumeration, presets.
//! - [`oracle`]: independent verification by direct propagation and a
//!   brute-force search over the sphere of admissible controls.
//!
//! The crate is `no_std` (with `alloc`) when built without the default `std`
//! feature; `std` only adds parallel candidate evaluation in [`oracle`].
//!
//! Units: ħ = 1, so energies and inverse times share units.

#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

mod error;
pub mod hamiltonians;
pub mod matcore;
pub mod oracle;
pub mod qsl;
pub mod randers;
mod tolerance;

pub use error::{Error, Result};
pub use hamiltonians::{
    build_pauli, rho, uniform_superposition_check, validate, ControlCandidate, ControlProblem,
    PauliString, Violation,
};
pub use matcore::{
    enumerate_log_branches, expm_hermitian_generator, hilbert_schmidt, logm_special_unitary,
    ComplexSquareMatrix, LogBranch, SpectralDecomposition,
};
pub use num_complex::Complex64;
pub use oracle::{
    brute_force_min_time, first_hit_time, propagate, GateDistance, SearchConfig, SearchReport,
};
pub use qsl::{
    budget_quadratic_root, preset, t_opt_closed_form, t_opt_over_branches, Preset, QslResult,
    TargetGate,
};
pub use randers::{
    curve_length, randers_norm_general, randers_norm_su, ControlSchedule, NavigationData, Segment,
};
pub use tolerance::Tolerances;
