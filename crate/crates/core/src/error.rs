use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed alist input; `line` is 1-based.
    #[error("alist parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("code construction failed: {0}")]
    Construction(String),

    /// A caller passed data of the wrong shape or an out-of-range value.
    #[error("invalid argument: {0}")]
    Argument(String),

    /// Decoder parameters or options that do not fit together.
    #[error("configuration error: {0}")]
    Config(String),

    #[error("training diverged at minibatch {minibatch}: {msg}")]
    Diverged { minibatch: usize, msg: String },

    #[error("invalid parameter file: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
