use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A caller-supplied argument violates an operation's precondition.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Invalid experiment configuration or literal.
    #[error("configuration error: {0}")]
    Config(String),

    /// The request exceeds a memory, size or work budget.
    #[error("resource limit exceeded: {0}")]
    Resource(String),

    /// The fixed-point precision cannot certify the requested quantity.
    #[error("insufficient precision: {0}")]
    Precision(String),

    /// A quadratic surd was requested for a perfect square discriminant.
    #[error("discriminant {0} is a perfect square; value is rational")]
    RationalSurd(String),

    #[error("continued fraction period not found within {0} terms")]
    PeriodNotFound(usize),

    /// An invariant or acceptance check failed at run time.
    #[error("assertion failed: {0}")]
    Assertion(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code used by the command line front end.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Assertion(_) => 1,
            Error::Resource(_) => 3,
            _ => 2,
        }
    }
}

pub(crate) fn precondition<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Precondition(msg.into()))
}
