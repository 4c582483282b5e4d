use thiserror::Error;

use crate::graph::Edge;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatchError {
    #[error("an engine needs at least one vertex")]
    NoVertices,

    #[error("vertex {vertex} is out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("self-loop at vertex {0} is not allowed")]
    SelfLoop(usize),

    #[error("edge {0} is already present")]
    DuplicateEdge(Edge),

    #[error("edge {0} is not present")]
    MissingEdge(Edge),

    /// Internal bookkeeping went wrong. Always an engine bug.
    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("orientation cascade exceeded {limit} flips; the arboricity bound was violated")]
    OrientationOverflow { limit: u64 },

    #[error("token ledger for list of vertex {vertex} went negative (balance {balance})")]
    TokenUnderflow { vertex: usize, balance: i64 },

    #[error("instance too large: {0}")]
    InstanceTooLarge(String),

    #[error("malformed snapshot: {0}")]
    MalformedSnapshot(String),
}

pub type Result<T, E = MatchError> = std::result::Result<T, E>;

macro_rules! invariant {
    ($cond:expr, $($arg:tt)+) => {
        if !$cond {
            return Err($crate::error::MatchError::Invariant(format!($($arg)+)));
        }
    };
}
pub(crate) use invariant;
