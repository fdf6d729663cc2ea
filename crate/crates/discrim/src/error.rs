use thiserror::Error;

/// Error type shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// An input failed a domain precondition; names the offending field.
    #[error("invalid {field}: {message}")]
    Domain {
        field: &'static str,
        message: String,
    },

    /// A dense (2^N-sized) code path was requested beyond its resource cap.
    #[error("resource limit exceeded: {0}")]
    Resource(String),

    /// An iterative solver failed to produce a usable result.
    #[error("solver failure: {0}")]
    Solver(String),

    /// A least-squares fit could not be performed.
    #[error("fit failure: {0}")]
    Fit(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn domain(field: &'static str, message: impl Into<String>) -> Self {
        Error::Domain {
            field,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
