use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DeconvError {
    #[error("invalid noise model: {0}")]
    InvalidNoise(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("variance term overflows at model dimension m = {m}")]
    Overflow { m: usize },

    #[error(
        "coefficient {j} of model m = {m} has imaginary residue {residue:e}, quadrature is not resolving the integrand"
    )]
    ImaginaryResidue { m: usize, j: i64, residue: f64 },

    #[error("quadrature did not converge after {nodes} nodes (last relative change {change:e})")]
    NoConvergence { nodes: usize, change: f64 },

    #[error("no admissible model dimension: {0}")]
    NoCandidates(String),

    #[error("{failed} of {reps} replications failed (first failure: {first})")]
    TooManyFailures {
        failed: usize,
        reps: usize,
        first: String,
    },

    #[error("{path}: {message}")]
    Data { path: String, message: String },

    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, DeconvError>;
