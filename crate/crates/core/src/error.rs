use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Input violates a precondition (unknown vertex, bad spec, wrong family).
    #[error("domain error: {0}")]
    Domain(String),

    /// An iterative routine failed to converge.
    #[error("numeric error: {0}")]
    Numeric(String),

    /// A configured resource cap was exceeded.
    #[error("resource error: {0}")]
    Resource(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

macro_rules! domain {
    ($($arg:tt)*) => {
        $crate::error::Error::Domain(format!($($arg)*))
    };
}
pub(crate) use domain;
