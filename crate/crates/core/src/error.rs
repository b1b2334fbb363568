use thiserror::Error;

/// Errors raised by state construction, operator algebra, witnesses and the oracle.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("mode count mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("mode index {index} out of range for {mode_count} modes")]
    ModeIndex { index: usize, mode_count: usize },

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("contract violated: {0}")]
    Contract(String),

    #[error("cannot normalize a zero-norm state")]
    DegenerateState,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unknown operator name `{0}`")]
    UnknownName(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_modes(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::Dimension { expected, found })
    }
}
