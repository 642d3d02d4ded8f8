use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Validation(String),

    #[error("blowup step {step} is not valid for a tuple of length {len}")]
    InvalidStep { step: String, len: usize },

    #[error("cannot blow down {tuple:?} at position {index}")]
    InvalidBlowdown { tuple: Vec<u64>, index: usize },

    #[error("{0:?} cannot be reached from (0) by blowups")]
    NotInZk(Vec<u64>),

    #[error("tuple length {k} exceeds the configured cap {cap}")]
    LengthCap { k: usize, cap: usize },

    #[error(
        "participants {participants:?} of event {event} are not consecutive in order {order:?}"
    )]
    NonConsecutiveBlock {
        event: String,
        participants: Vec<usize>,
        order: Vec<usize>,
    },

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("word parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
