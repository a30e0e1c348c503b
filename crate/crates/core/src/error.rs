use thiserror::Error;

/// Errors shared across the solver.
#[derive(Debug, Error)]
pub enum NormFlowError {
    /// Invalid domain, parameter, or scheme configuration.
    #[error("configuration error: {0}")]
    Config(String),

    /// A field has numerically vanished; the nonlocal multiplier is undefined.
    #[error("degenerate field: {0}")]
    DegenerateField(String),

    /// A time step produced non-finite values (explicit scheme outside its
    /// stability region, or a singular resolvent system).
    #[error("stability error: {0}")]
    Stability(String),

    /// The shooting bracket could not be established.
    #[error("oracle failure: {0}")]
    OracleFailure(String),

    /// Backtracking line search exhausted without decreasing F.
    #[error("step size failure: {0}")]
    StepSizeFailure(String),

    /// Persistence / checkpoint problems.
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for NormFlowError {
    fn from(e: std::io::Error) -> Self {
        NormFlowError::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, NormFlowError>;
