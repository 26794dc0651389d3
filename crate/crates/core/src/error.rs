use thiserror::Error;

use crate::image::pnm::PnmError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("image dimensions must be positive, got {width}x{height}")]
    EmptyImage { width: usize, height: usize },

    #[error("buffer holds {actual} samples but {width}x{height} needs {expected}")]
    BufferSize { width: usize, height: usize, expected: usize, actual: usize },

    #[error("dimension mismatch: {left:?} vs {right:?}")]
    DimensionMismatch { left: (usize, usize), right: (usize, usize) },

    #[error("cannot build {requested} pyramid levels from a {width}x{height} image (at most {max})")]
    TooManyLevels { requested: usize, max: usize, width: usize, height: usize },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error(transparent)]
    Pnm(#[from] PnmError),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter { name, reason: reason.into() }
    }

    pub(crate) fn check_dims(left: (usize, usize), right: (usize, usize)) -> Result<()> {
        if left == right {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { left, right })
        }
    }
}
