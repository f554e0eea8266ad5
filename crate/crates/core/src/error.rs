use thiserror::Error;

/// Errors produced by the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("shape mismatch: expected {expected}, got {got}")]
    Shape { expected: String, got: String },

    #[error("matrix is not Hermitian (max |M - M^dagger| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("party index {party} out of range for {parties} subsystems")]
    BadParty { party: usize, parties: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("trace has non-negligible imaginary part {imag:e}")]
    NonRealTrace { imag: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("cannot normalize a matrix with trace {trace:e}")]
    ZeroTrace { trace: f64 },

    #[error("need at least {needed} moments, got {got}")]
    TooFewMoments { needed: usize, got: usize },

    #[error("criterion requires a normalized moment sequence")]
    NotNormalized,

    #[error("domain error: {0}")]
    DomainError(String),

    #[error("moment of order {order} has mixed signs across parties; geometric mean undefined")]
    NegativeGeometricMeanInput { order: usize },

    #[error("parameter {value} out of range for {family} ({range})")]
    OutOfRange {
        family: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("operation requires a bipartite state, got {parties} subsystems")]
    NotBipartite { parties: usize },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
