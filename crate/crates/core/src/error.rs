use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid norm kind: {0}")]
    InvalidNorm(String),

    #[error("oracle dimension {dim} exceeds the cap of {cap}")]
    DimensionTooLarge { dim: usize, cap: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("duality matrix is not diagonal: entry ({row}, {col}) has modulus {modulus:e}")]
    NonDiagonalDuality { row: usize, col: usize, modulus: f64 },

    #[error("operation `{op}` is not supported for {model} models")]
    UnsupportedModel { op: &'static str, model: &'static str },

    #[error("unsupported norm for `{op}`: {norm}")]
    UnsupportedNorm { op: &'static str, norm: String },

    #[error("eigenvalue iteration did not converge after {iterations} sweeps (dimension {dim})")]
    NoConvergence { iterations: usize, dim: usize },

    #[error("resolvent is singular at {lambda}")]
    SingularResolvent { lambda: Complex64 },

    #[error("{lambda} is not an eigenvalue (nearest distance {distance:e})")]
    NotAnEigenvalue { lambda: Complex64, distance: f64 },

    #[error("extrapolation did not converge: {0}")]
    Extrapolation(String),

    #[error("strategy unavailable: {0}")]
    StrategyUnavailable(String),

    #[error("operator is not classifiable: spectral radius {spr:e} is not above tolerance")]
    NotClassifiable { spr: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("no positive vector survives the leading Laurent coefficient: {0}")]
    PositiveVectorNotFound(String),

    #[error("generator failed: {0}")]
    Generator(String),

    #[error("schema error: {0}")]
    Schema(String),
}

pub type Result<T> = std::result::Result<T, Error>;
