use alloc::vec::Vec;

use crate::hamiltonians::Violation;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {0}x{0} vs {1}x{1}")]
    DimensionMismatch(usize, usize),

    #[error("matrix data has {got} entries, expected {expected}")]
    BadShape { expected: usize, got: usize },

    #[error("dimension must be at least 1")]
    EmptyMatrix,

    #[error("matrix is not Hermitian (‖A − A†‖_F = {0:.3e})")]
    NotHermitian(f64),

    #[error("generator is not anti-Hermitian (‖X + X†‖_F = {0:.3e})")]
    NotAntiHermitian(f64),

    #[error("matrix is not unitary (‖U†U − I‖_F = {0:.3e})")]
    NotUnitary(f64),

    #[error("determinant is not 1 (|det − 1| = {0:.3e})")]
    NotSpecial(f64),

    #[error("eigen-decomposition failed to converge")]
    NoConvergence,

    #[error("invalid Pauli string {0:?}")]
    BadPauli(alloc::string::String),

    #[error("Pauli strings have mixed lengths")]
    MixedPauliLengths,

    #[error("empty Pauli term list")]
    EmptyPauliList,

    #[error("drift Hamiltonian is zero; the budget ratio is undefined")]
    DriftFree,

    #[error("control problem is invalid: {0:?}")]
    Invalid(Vec<Violation>),

    #[error("Tr(A·H0) = 0: the specialized norm is singular here, use the general form")]
    SingularSpecializedForm,

    #[error("logarithm is zero")]
    ZeroLogarithm,

    #[error("no positive root for the optimal time")]
    NoPositiveRoot,

    #[error("segment {index} has non-positive duration {duration}")]
    BadDuration { index: usize, duration: f64 },

    #[error("unknown preset {0:?}")]
    UnknownPreset(alloc::string::String),

    #[error("unknown preset parameter {0:?}")]
    UnknownParameter(alloc::string::String),

    #[error("preset parameters violate the small-wind condition: {0}")]
    PresetParameters(&'static str),

    #[error("dimension {dim} exceeds the search guard {max}")]
    DimensionGuard { dim: usize, max: usize },

    #[error("{0} branch combinations requested; reduce max_shift")]
    TooManyBranches(usize),

    #[error("t_max must be positive (got {0})")]
    BadTimeWindow(f64),
}

pub type Result<T> = core::result::Result<T, Error>;
