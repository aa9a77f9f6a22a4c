use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// Model or operation parameters violate a documented invariant.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// A caller-side precondition was not met (e.g. non-regular input graph).
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// An iterative numerical routine failed to converge or lost accuracy.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// A rejection/restart sampler exhausted its attempt budget.
    #[error("sampling failure: {0}")]
    SamplingFailure(String),

    /// Estimated cost or memory exceeds the configured cap.
    #[error("resource limit: {0}")]
    Resource(String),

    /// A constructive witness or certificate could not be built in this regime.
    #[error("construction failure: {0}")]
    Construction(String),

    /// Degree repair could not reach an exactly regular graph.
    #[error("repair failure: {0}")]
    RepairFailure(String),

    /// Input outside the mathematical domain of an identity (e.g. |c| = 1 weights).
    #[error("domain error: {0}")]
    Domain(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    /// Parse failure in one of the text file formats.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
