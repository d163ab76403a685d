//! Error types shared by every module of the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Failure modes of the library operations.
///
/// `DepthExceeded` and `CapExceeded` are resource guards (finite schedule, or a
/// computation that would outgrow a caller-supplied budget); the remaining
/// variants are contract violations in the inputs.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A stage index was requested past the end of an explicit schedule.
    #[error("stage {requested} exceeds schedule depth {max}")]
    DepthExceeded { requested: usize, max: usize },

    /// A computation would exceed a configured size cap.
    #[error("{what} would need {needed}, exceeding the cap {cap}")]
    CapExceeded {
        what: &'static str,
        needed: String,
        cap: String,
    },

    /// A digit outside `0..m_j` was supplied at position `j`.
    #[error("digit {digit} at position {position} is out of range 0..{radix}")]
    InvalidDigit {
        position: usize,
        digit: u32,
        radix: u32,
    },

    /// The digit string consists entirely of maximal digits, which is excluded
    /// from the space (and from every ball address).
    #[error("digit string is all maximal digits")]
    AllNines,

    /// A floor index at or above the spacer bound `a_zeta^iota`.
    #[error("floor {floor} is out of range 0..{bound}")]
    InvalidFloor { floor: u64, bound: u64 },

    /// A level-`k` operation was invoked with an unusable level.
    #[error("level {level} is not valid here (need {need})")]
    InvalidLevel { level: usize, need: &'static str },

    /// A digit position outside the string.
    #[error("position {position} is out of range for a level-{level} string")]
    PositionOutOfRange { position: usize, level: usize },

    /// An ordinal at or above the number of balls of the level.
    #[error("ordinal {ordinal} is out of range for {count} balls")]
    OrdinalOutOfRange { ordinal: String, count: String },

    /// Two digit strings of different lengths were compared.
    #[error("digit strings have different levels {left} and {right}")]
    LevelMismatch { left: usize, right: usize },
}

/// A single rule violation found while validating a schedule description.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScheduleViolation {
    /// Every stage must cut into at least two columns.
    #[error("m_{k} = {m}, but every cut count must be at least 2")]
    CutTooSmall { k: usize, m: u32 },

    /// Stage `k` needs exactly `m_k - 1` spacer counts.
    #[error("a_{k} has {got} entries, but m_{k} - 1 = {expected} are required")]
    SpacerArity {
        k: usize,
        expected: usize,
        got: usize,
    },

    /// Every spacer count must be at least 1.
    #[error("a_{k}^{i} = {value}, but every spacer count must be at least 1")]
    SpacerTooSmall { k: usize, i: usize, value: u64 },

    /// The cut-count and spacer-row sequences must pair up.
    #[error("{m_len} cut counts but {a_len} spacer rows")]
    StageCountMismatch { m_len: usize, a_len: usize },

    /// An eventually periodic schedule needs a nonempty period.
    #[error("the period of an eventually periodic schedule must be nonempty")]
    EmptyPeriod,
}
