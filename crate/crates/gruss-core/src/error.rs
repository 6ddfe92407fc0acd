use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix entries must be finite")]
    NonFinite,

    #[error("entry list has length {got}, expected {expected}")]
    EntryCount { expected: usize, got: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("matrix is not Hermitian: ‖H − H*‖ = {residual:.3e}")]
    NotHermitian { residual: f64 },

    #[error("matrix is not positive semidefinite: min eigenvalue {min_eigenvalue:.3e}")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },

    #[error("matrix is not positive definite: min eigenvalue {min_eigenvalue:.3e}")]
    NotPositiveDefinite { min_eigenvalue: f64 },

    #[error("trace must equal 1: |tr − 1| = {deviation:.3e}")]
    TraceNotOne { deviation: f64 },

    #[error("{context}: no convergence after {iterations} iterations")]
    NonConvergence { context: &'static str, iterations: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("empty point set")]
    EmptyPointSet,

    #[error("precondition violated: {predicate} (residual {residual:.3e})")]
    Precondition { predicate: String, residual: f64 },

    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),

    #[error("unknown chain `{0}`")]
    UnknownChain(String),

    #[error("rank {rank} exceeds dimension {dim}")]
    RankExceedsDim { rank: usize, dim: usize },
}
