use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch in {op}: {left:?} vs {right:?}")]
    Dimension { op: &'static str, left: (usize, usize), right: (usize, usize) },
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("SVD of {rows}x{cols} matrix did not converge after {sweeps} sweeps")]
    Factorization { rows: usize, cols: usize, sweeps: usize },
    #[error("iteration did not converge after {iterations} steps (measured contraction {rate})")]
    NonConvergence { iterations: usize, rate: f64 },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("unsupported size {rows}x{cols}: at most {limit} entries allowed")]
    UnsupportedSize { rows: usize, cols: usize, limit: usize },
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
