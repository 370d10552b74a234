use thiserror::Error;

use crate::graph::VertexId;

/// A single edge rejected while building a graph.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum EdgeError {
    #[error("vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { vertex: u64, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(VertexId),
    #[error("duplicate edge {{{0}, {1}}}")]
    Duplicate(VertexId, VertexId),
    #[error("weight {0} is not a finite real >= 1")]
    BadWeight(f64),
}

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: {source}")]
    Edge {
        line: usize,
        #[source]
        source: EdgeError,
    },
    #[error(transparent)]
    InvalidEdge(#[from] EdgeError),
    #[error("header declares {declared} edges but body has {found}")]
    EdgeCountMismatch { declared: usize, found: usize },
    #[error("invalid generator parameters: {0}")]
    InvalidParams(String),
}

/// Bad construction parameters for an oracle.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamError {
    #[error("K must satisfy 1 <= K <= n (got K = {k_cut}, n = {n})")]
    Cutoff { k_cut: usize, n: usize },
    #[error("epsilon must be a finite real > 0 (got {0})")]
    Epsilon(String),
    #[error("hierarchy depth k must be >= 1")]
    Depth,
    #[error("sampling constant C must be a finite real > 0 (got {0})")]
    SamplingConstant(f64),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QueryError {
    #[error("vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { vertex: VertexId, n: usize },
    #[error("no path between {0} and {1}: different components")]
    NoPath(VertexId, VertexId),
    #[error("vertex {0} was not reached by the hop-bounded search")]
    Unreached(VertexId),
    #[error("vertex {0} is not a pivot")]
    NotAPivot(VertexId),
    #[error("operation not supported: {0}")]
    Unsupported(&'static str),
}

#[derive(Debug, Error)]
pub enum SnapshotError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("bad magic bytes; not an oracle snapshot")]
    BadMagic,
    #[error("unsupported snapshot version {0}")]
    UnsupportedVersion(u32),
    #[error("snapshot truncated while reading {0}")]
    Truncated(&'static str),
    #[error("missing section {0}")]
    MissingSection(&'static str),
    #[error("malformed snapshot: {0}")]
    Malformed(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}
