use thiserror::Error;

use crate::diophantine::DiophantineError;
use crate::dynsys::DynError;
use crate::kernels::KernelError;
use crate::precision::PrecisionError;

#[derive(Debug, Error)]
pub enum Error {
    #[error("validation error: {0}")]
    Validation(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error(transparent)]
    Precision(#[from] PrecisionError),
    #[error(transparent)]
    Dyn(#[from] DynError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Diophantine(#[from] DiophantineError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    /// Parameter problems (bad input) as opposed to failures while running.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::Validation(_)
                | Error::Precision(PrecisionError::Parse { .. })
                | Error::Dyn(DynError::Invalid(_))
                | Error::Dyn(DynError::Incompatible(_))
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
