use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid complex: {0}")]
    InvalidComplex(String),

    /// The mod-p cocycle has no integer lift with coefficients near zero.
    #[error("cocycle does not lift to integer coefficients modulo {prime} (p-torsion)")]
    TorsionObstruction { prime: u32 },

    /// Iterative solver ran out of iterations; `best` is the last iterate.
    #[error("least squares did not converge after {iterations} iterations (residual {residual:e})")]
    NotConverged {
        iterations: usize,
        residual: f64,
        best: Vec<f64>,
    },

    #[error("cocycle is not cohomologous to an integer class: edge ({0}, {1}) is off by {2:e}")]
    NonIntegralClass(usize, usize, f64),

    #[error("degree is unreliable: {0}")]
    UnreliableDegree(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
