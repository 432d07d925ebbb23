use thiserror::Error;

/// Errors shared by every module in the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    /// A precondition on an operation's arguments was violated.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A distance transform was requested over a mask with no source pixels.
    #[error("distance transform requires at least one source pixel")]
    EmptySourceSet,

    /// A click was requested on a mask with no foreground pixels.
    #[error("mask has no foreground pixels")]
    EmptyMask,

    /// Window cropping found no nonzero image content to crop to.
    #[error("image has no nonzero pixels to crop to")]
    EmptyWindow,

    /// An external or injected predictor broke the prediction contract.
    #[error("predictor violated its contract: {0}")]
    PredictorContractViolation(String),

    /// Filesystem or image codec failure.
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
