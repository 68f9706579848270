use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: max |M - M^dagger| = {residual:e}")]
    NotHermitian { residual: f64 },

    #[error("matrix is not a projector: {reason}")]
    NotProjector { reason: String },

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    ConvergenceFailure { sweeps: usize, off_norm: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid matrix shape: {0}")]
    Shape(String),

    #[error("state vector has zero norm")]
    ZeroState,

    #[error("fiber coordinate {0} is outside (0,1)")]
    OutOfDomain(f64),

    #[error("invalid piecewise function: {0}")]
    InvalidFunction(String),

    #[error("invalid quantile step: {0}")]
    InvalidStep(String),

    #[error("invalid spectral decomposition: {0}")]
    InvalidDecomposition(String),

    #[error("projectors {first} and {second} do not commute (commutator norm {norm:e})")]
    NotCommuting { first: usize, second: usize, norm: f64 },

    #[error("joint operator eigenvalue {eigenvalue} does not sit on an integer sector label")]
    DegenerateLabeling { eigenvalue: f64 },

    #[error("propositions are not backed by the same spectral decomposition")]
    BackingMismatch,
}
