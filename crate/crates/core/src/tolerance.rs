/// Numerical tolerances shared by the validating operations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Absolute Frobenius tolerance for Hermiticity, unitarity, tracelessness
    /// and spectral reconstruction.
    pub spec: f64,
    /// Eigenphase distance to ±π below which a logarithm is flagged as
    /// sitting on the branch cut.
    pub branch: f64,
    /// Relative tolerance on the control budget `Tr(Hc²) = budget`.
    pub budget: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            spec: 1e-9,
            branch: 1e-6,
            budget: 1e-9,
        }
    }
}
