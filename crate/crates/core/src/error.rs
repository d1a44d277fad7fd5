use thiserror::Error;

/// Errors raised by the certificate, flow, game and experiment layers.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or out-of-range input supplied by the caller.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A documented precondition of an operation does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A numerical routine failed to produce a usable answer.
    #[error("computation failed: {0}")]
    Computation(String),

    /// A constructed certificate failed its own numerical verification.
    /// This points at a bug rather than at bad input.
    #[error("internal verification failed: {0}")]
    Verification(String),

    #[error("trajectory diverged at t = {time}")]
    Divergence { time: f64 },

    #[error("contraction envelope violated at t = {time}: distance {observed:e} exceeds bound {bound:e}")]
    EnvelopeViolation { time: f64, observed: f64, bound: f64 },

    #[error("could not sample a connected graph after {attempts} attempts (n = {nodes}, p = {p})")]
    GraphSampling { nodes: usize, p: f64, attempts: usize },

    #[error("graph is not connected")]
    Disconnected,

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code used by the command-line front end: `2` for internal
    /// verification failures, `1` for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Verification(_) | Error::EnvelopeViolation { .. } => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
