use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: max |A - A†| = {deviation:e} exceeds tolerance {tolerance:e}")]
    NotHermitian { deviation: f64, tolerance: f64 },

    #[error("Jacobi eigensolver did not converge within {sweeps} sweeps")]
    ConvergenceFailure { sweeps: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix has a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("not a density matrix: {0}")]
    NotDensityMatrix(String),

    #[error("invalid Bell-diagonal triplet: eigenvalue {label} = {value} is negative")]
    InvalidTriplet { label: &'static str, value: f64 },

    #[error("magnetic field h must be nonzero")]
    ZeroField,

    #[error("quadrature needs an even step count >= 4, got {0}")]
    BadStepCount(usize),

    #[error("energy structure has no recorded period")]
    MissingPeriod,

    #[error("clock outcome {outcome} has probability {probability:e}; conditional is undefined")]
    DegenerateConditional { outcome: &'static str, probability: f64 },

    #[error("bad dimension {0}: must be at least 2")]
    BadDimension(usize),

    #[error("no zero-energy sector: residual |H Ψ| = {residual:e}")]
    NoZeroEnergySector { residual: f64 },

    #[error("index {index} out of range 0..{len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
