//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid cone family: {0}")]
    ConeFamily(String),

    #[error("cone id {id} out of range (c = {c})")]
    ConeId { id: usize, c: usize },

    #[error("frame axis index {i} out of range 1..={d}")]
    FrameIndex { i: usize, d: usize },

    #[error("target coincides with apex; no cone contains the apex")]
    ApexTarget,

    #[error("dimension mismatch: {0} vs {1}")]
    Dimension(usize, usize),

    #[error("unknown element id {0}")]
    UnknownId(u64),

    #[error("duplicate element id {0}")]
    DuplicateId(u64),

    #[error("rank {rank} out of range 1..={len}")]
    RankRange { rank: usize, len: usize },

    #[error("operation on empty structure: {0}")]
    Empty(&'static str),

    #[error("requested swap of non-adjacent elements {0} and {1}")]
    NotAdjacent(u64, u64),

    #[error("k = {k} must satisfy 1 <= k < n = {n}")]
    BadK { k: usize, n: usize },

    #[error("query point coincides with point {0} of the set")]
    QueryCoincides(u32),

    #[error("scenario parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("scenario invalid: {0}")]
    Scenario(String),

    #[error("query time {0} outside simulated range")]
    QueryTime(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}
