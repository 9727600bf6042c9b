use thiserror::Error;

/// Errors surfaced by parsing, algorithm preconditions, and the exact oracles.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch for {what}: expected {expected}, got {actual}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        actual: usize,
    },

    #[error("node {node} out of range for a graph with {n} nodes")]
    InvalidNode { node: u32, n: usize },

    #[error("separation of node {node} against itself is undefined")]
    SameNode { node: u32 },

    #[error("invalid {name}: {message}")]
    InvalidParameter { name: &'static str, message: String },

    /// An algorithm was given fewer intervention slots than its construction
    /// needs.  The message names the violated bound, including the minimum
    /// feasible m whenever one is computable.
    #[error("m = {m} is too small: {requirement}")]
    InterventionCountTooSmall { m: usize, requirement: String },

    #[error(
        "no feasible weight-1 split: {needed} pairwise non-dominating rows \
         requested but at most {available} fit in {m} columns"
    )]
    AntichainDeficit {
        needed: usize,
        available: usize,
        m: usize,
    },

    /// Instance exceeds an exact-oracle size limit (CLI exit code 3).
    #[error("instance too large for the exact oracle: {0}")]
    OracleLimit(String),

    #[error(
        "partition has {cross} cross edges, over the budget of {budget}; \
         use a finer eps or a different partitioner"
    )]
    CrossEdgeBudget { cross: usize, budget: usize },

    #[error("skeleton mismatch: {0}")]
    SkeletonMismatch(String),

    #[error("supergraph contract violated: {0}")]
    SupergraphViolation(String),

    #[error("groups do not partition the node set: {0}")]
    NotAPartition(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Exit-code family for the CLI: 1 = I/O or parse, 2 = precondition,
/// 3 = oracle size limit.
impl Error {
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io(_) | Error::Parse { .. } | Error::Json(_) => 1,
            Error::OracleLimit(_) => 3,
            _ => 2,
        }
    }
}
