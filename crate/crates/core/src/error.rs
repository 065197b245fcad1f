use thiserror::Error;

use crate::game::{Edge, Player};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("it is {expected:?}'s turn, not {got:?}'s")]
    WrongTurn { expected: Player, got: Player },

    #[error("edge {0} is already claimed")]
    AlreadyClaimed(Edge),

    #[error("position {0} is already claimed")]
    AlreadyClaimedPosition(usize),

    #[error("expected {expected} claims, got {got}")]
    WrongClaimCount { expected: usize, got: usize },

    #[error("duplicate edge {0} in a single claim")]
    DuplicateInClaim(Edge),

    #[error("vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("position {position} out of range for universe of size {size}")]
    PositionOutOfRange { position: usize, size: usize },

    #[error("no moves left: the board is exhausted")]
    BoardExhausted,

    #[error("strategy {strategy} faulted: {message}")]
    StrategyFault { strategy: String, message: String },

    #[error("strategy {strategy} is not applicable: {reason}")]
    StrategyInapplicable { strategy: String, reason: String },

    #[error("winning-set family has {count} members, over the cap of {cap}")]
    FamilyTooLarge { count: String, cap: u64 },

    #[error("instance over solver cap: {0}")]
    OverCap(String),

    #[error("memo table exceeded {cap} entries")]
    MemoOverflow { cap: usize },

    #[error("malformed input: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
