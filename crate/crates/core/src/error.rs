use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CtnError {
    #[error("degree {0} is outside the supported range {min}..={max}", min = crate::perm::MIN_DEGREE, max = crate::perm::MAX_DEGREE)]
    DegreeOutOfRange(usize),
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },
    #[error("not a permutation: {0}")]
    InvalidPermutation(String),
    #[error("rank {rank} out of range for degree {n} (must be below {count})")]
    RankOutOfRange { rank: usize, n: usize, count: usize },
    #[error("invalid transposition ({0},{1})")]
    InvalidTransposition(usize, usize),
    #[error("vertices {0} and {1} are not adjacent in CT_n")]
    NotAdjacent(String, String),
    #[error("edge id {0} out of range")]
    EdgeOutOfRange(usize),
    #[error("({0}, {1}, {2}) is not a 2-path")]
    NotTwoPath(String, String, String),
    #[error("cycle length {0} is not supported (must be even and in 4..=14)")]
    InvalidCycleLength(usize),
    #[error("invalid cycle: {0}")]
    InvalidCycle(String),
    #[error("family index {i} out of range for n = {n}")]
    FamilyOutOfRange { i: usize, n: usize },
    #[error("lift failed: {0}")]
    LiftFailed(String),
    #[error("{0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, CtnError>;
