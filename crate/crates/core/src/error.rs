use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("point {index} is outside the kernel domain: {reason}")]
    DomainMismatch { index: usize, reason: String },

    #[error("matrix is not Hermitian (max |A - A*| = {max_asymmetry:e})")]
    NotHermitian { max_asymmetry: f64 },

    #[error("elements refer to different kernels")]
    KernelMismatch,

    #[error("numerical PSD violation: eigenvalue or quadratic form {min_eigenvalue:e} below tolerance")]
    PsdViolation { min_eigenvalue: f64 },

    #[error("kernel denominator {modulus:e} is too close to zero")]
    NearSingular { modulus: f64 },

    #[error("{what}: expected length {expected}, found {found}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    #[error("adjoint identity violated on trial {trial}: residual {residual:e} exceeds {tol:e}")]
    AdjointViolation { trial: usize, residual: f64, tol: f64 },

    #[error("Cholesky factorization failed after the largest jitter (min eigenvalue {min_eigenvalue:e})")]
    CholeskyFailure { min_eigenvalue: f64 },

    #[error("network is disconnected: vertex {vertex} cannot reach the base point")]
    Disconnected { vertex: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),
}
