use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("edge {index}: weight {weight} must be positive and finite")]
    InvalidWeight { index: usize, weight: f64 },

    #[error("edge {index}: vertex {vertex} out of range for n = {n}")]
    EdgeOutOfRange {
        index: usize,
        vertex: usize,
        n: usize,
    },

    #[error("vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("graph is disconnected")]
    Disconnected,

    #[error("vertices {s} and {t} lie in different components; effective resistance is infinite")]
    InfiniteResistance { s: usize, t: usize },

    #[error("right-hand side must sum to zero (sum = {sum})")]
    NonZeroSum { sum: f64 },

    #[error("solver did not converge after {iterations} iterations (residual {residual:e}, target {target:e})")]
    NoConvergence {
        iterations: usize,
        residual: f64,
        target: f64,
    },

    #[error("dense factorization failed")]
    Factorization,

    #[error("all potentials are equal; no nontrivial level set exists")]
    DegeneratePotential,

    #[error("not a partition: {0}")]
    NotAPartition(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
