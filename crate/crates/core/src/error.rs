//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("input has length {got}, network expects {expected}")]
    InputShape { expected: usize, got: usize },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("activation powers differ: {0} vs {1}")]
    PowerMismatch(u32, u32),

    #[error("network depths differ: {0} vs {1}")]
    DepthMismatch(usize, usize),

    #[error("non-finite value produced by affine layer {layer}")]
    Overflow { layer: usize },

    #[error("invalid network: {0}")]
    Invalid(String),

    #[error("activation power must be an integer in 2..=12, got {0}")]
    BadPower(u32),

    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),

    #[error("singular system: {0}")]
    Singular(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("index set is not downward closed: {0}")]
    Incomplete(String),

    #[error("strategy not applicable: {0}")]
    Strategy(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code the CLI maps this error to: 1 for validation
    /// problems, 2 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Overflow { .. } | Error::Singular(_) | Error::Numerical(_) => 2,
            _ => 1,
        }
    }
}
