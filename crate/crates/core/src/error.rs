use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unknown vertex {vertex} (graph has {n} vertices)")]
    UnknownVertex { vertex: usize, n: usize },

    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),

    #[error("{0}-{1} is not an edge of the graph")]
    NotAnEdge(usize, usize),

    #[error("not a matching: {0}")]
    NotAMatching(String),

    #[error("graph is not chordal ({0})")]
    NotChordal(String),

    #[error("invalid elimination order: {0}")]
    InvalidOrder(String),

    #[error("malformed DP table: {0}")]
    MalformedTable(String),

    #[error("edge {0}-{1} is already colored")]
    AlreadyColored(usize, usize),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("oracle limits exceeded: {0}")]
    LimitsExceeded(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An internal invariant failed. Never a legal outcome.
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
