use thiserror::Error;

/// Errors raised anywhere in the simulation pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument fell outside the domain of a function.
    #[error("domain error: {0}")]
    Domain(String),

    /// A scenario is structurally invalid and cannot be run.
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    /// Non-finite or runaway values appeared during integration.
    #[error("numerical divergence at step {step} (t = {time:e} tau): {reason}")]
    Divergence {
        step: u64,
        time: f64,
        reason: String,
    },

    /// The run would exceed a configured memory or step budget.
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    /// A closed form was evaluated at a singular point.
    #[error("singular point: {0}")]
    Singular(String),

    /// A metric is undefined for the given data.
    #[error("undefined metric: {0}")]
    Undefined(String),

    /// A trace has no dominant peak.
    #[error("ambiguous peak: {0}")]
    Ambiguous(String),

    /// Configuration text could not be parsed or resolved.
    #[error("config error: {0}")]
    Config(String),

    /// Sweep specification or checkpoint problem.
    #[error("sweep error: {0}")]
    Sweep(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
