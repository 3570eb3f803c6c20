use thiserror::Error;

/// Errors produced by construction and by the fallible calculus operations.
///
/// Precondition violations that indicate caller bugs (an event built for a
/// different space, an out-of-range world index) panic instead; see the
/// individual operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("world space needs at least one world")]
    EmptySpace,

    #[error("world space supports at most {max} worlds, got {n}")]
    TooManyWorlds { n: usize, max: usize },

    #[error("duplicate world label `{0}`")]
    DuplicateLabel(String),

    #[error("unknown world label `{0}`")]
    UnknownLabel(String),

    #[error("expected {expected} per-world values, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("masses must sum to exactly 1, got {0}")]
    MassSumNotOne(String),

    #[error("mass of world `{0}` must be strictly positive")]
    NonPositiveMass(String),

    #[error("sequence entry at position {0} must be strictly positive")]
    NonPositiveEntry(usize),

    #[error("minimum rank must be 0, got {0}")]
    MinRankNotZero(u32),

    #[error("strata counts must be non-empty and end with a positive count")]
    InvalidStrata,

    #[error("evidence event is empty")]
    EmptyEvidence,

    #[error("state space too large: {n} worlds exceeds guard {guard}")]
    SpaceTooLarge { n: usize, guard: usize },

    #[error("sequence increases at position {0}")]
    NotSorted(usize),

    #[error("epsilon must lie strictly between 0 and 1")]
    BadEpsilon,

    #[error("rank {rank} is outside the strata range 0..={max}")]
    RankOutOfRange { rank: usize, max: usize },

    #[error("cannot parse `{input}` as an exact number: {reason}")]
    InvalidNumber { input: String, reason: &'static str },
}

pub type Result<T> = std::result::Result<T, Error>;
