use thiserror::Error;

/// Errors produced by graph ingestion, threshold resolution, and the
/// analysis operations built on top of them.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("edge list contains no nodes")]
    EmptyGraph,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("node id {id} out of range (n = {n})")]
    NodeOutOfRange { id: u64, n: usize },

    #[error("threshold for node {node} is {given} but in-degree is only {in_degree}")]
    ThresholdOutOfBounds {
        node: u32,
        given: u32,
        in_degree: u32,
    },

    #[error("per-node threshold table is missing node {0}")]
    MissingThreshold(u32),

    #[error("unsupported threshold kind for this operation: {0}")]
    UnsupportedThreshold(&'static str),

    #[error("operation requires a symmetric graph")]
    AsymmetricGraph,

    #[error("graph has no edges")]
    NoEdges,

    #[error("graph too large for exhaustive search (n = {n}, limit = {limit})")]
    EnumerationGuard { n: usize, limit: usize },

    #[error("no complete seed set of size at most {0}")]
    NoSeedWithinLimit(usize),

    #[error("partition covers {partition} nodes but graph has {graph}")]
    PartitionSizeMismatch { partition: usize, graph: usize },

    #[error("bound is zero; ratio undefined")]
    ZeroBound,

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
