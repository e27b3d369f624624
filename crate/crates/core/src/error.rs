use alloc::string::String;

/// Errors raised by constructions in this crate.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("letter {0} is not in the alphabet")]
    UnknownLetter(String),
    #[error("numeration system is not Pisot: {0}")]
    NotPisot(String),
    #[error("construction exceeded the state limit of {0}")]
    StateLimit(usize),
    #[error("normalizer has two output letters between states {from} and {to} for input {input}")]
    AmbiguousOutput {
        from: usize,
        input: String,
        to: usize,
    },
}

pub type Result<T> = core::result::Result<T, Error>;
