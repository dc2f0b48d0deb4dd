use thiserror::Error;

/// Errors returned by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input was NaN or infinite.
    #[error("non-finite input: {0}")]
    Domain(String),

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    /// Input too large for the exact algorithm.
    #[error("size limit exceeded: {0}")]
    Size(String),

    #[error("degenerate configuration: {0}")]
    Degenerate(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    /// Box does not meet the region a claim is stated on.
    #[error("box outside claim region: {0}")]
    Region(String),

    /// Interval evaluation hit a division by an interval containing zero
    /// (or a square root of a possibly negative interval). The branch and
    /// bound driver reacts by bisecting.
    #[error("interval evaluation requires a split")]
    SplitRequired,
}

pub type Result<T> = std::result::Result<T, Error>;
