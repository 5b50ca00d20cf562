use thiserror::Error;

/// Errors raised while loading data, configuring a run or running the dense kernels.
///
/// Per-invariant numerical trouble is *not* reported through this type; it is
/// recorded as a failed status on the affected fingerprint block instead.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: self-loop at vertex {vertex}")]
    SelfLoop { line: usize, vertex: usize },

    #[error("graph {graph_id}: self-loop at vertex {vertex}")]
    SelfLoopEdge { graph_id: String, vertex: usize },

    #[error("graph {graph_id}: edge {{{u}, {v}}} out of range for {n} vertices")]
    VertexOutOfRange {
        graph_id: String,
        u: usize,
        v: usize,
        n: usize,
    },

    #[error("graph {graph_id}: {what} has {actual} rows, expected {expected}")]
    Dimension {
        graph_id: String,
        what: &'static str,
        expected: usize,
        actual: usize,
    },

    #[error("duplicate graph id {0:?} in dataset")]
    DuplicateId(String),

    #[error("dataset {0:?} is empty")]
    EmptyDataset(String),

    #[error("eigendecomposition did not converge (matrix order {order})")]
    NoConvergence { order: usize },

    #[error("matrix of order {order} is singular to tolerance")]
    Singular { order: usize },

    #[error("configuration: {0}")]
    Config(String),

    #[error("schema mismatch: {0}")]
    Schema(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
