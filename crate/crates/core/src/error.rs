use thiserror::Error;

use crate::graph::{Distance, VertexId};

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("vertex {id} is out of range (n = {n})")]
    VertexOutOfRange { id: u64, n: usize },

    /// Endpoints are reported with their external (input) ids.
    #[error("no edge between {u} and {v}")]
    MissingEdge { u: u64, v: u64 },

    #[error("edge weight {0} is not supported")]
    InvalidWeight(Distance),

    #[error("total edge weight overflows the distance range")]
    WeightOverflow,

    #[error("balance parameter must lie in (0, 0.5], got {0}")]
    InvalidBeta(f64),

    #[error("graph has no vertices")]
    EmptyGraph,

    #[error("query hierarchy depth {0} does not fit a 64-bit partition bitstring")]
    TreeTooDeep(usize),

    #[error("invalid query hierarchy: {0}")]
    InvalidHierarchy(String),

    #[error("vertices {0} and {1} are not comparable in the vertex partial order")]
    Incomparable(VertexId, VertexId),

    #[error("label position {i} out of range for vertex {v} (label length {len})")]
    LabelPosition { v: VertexId, i: usize, len: usize },

    #[error("{what}: size {size} exceeds the limit of {limit}")]
    TooLarge {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("index file: {0}")]
    Format(String),

    #[error("index file section `{0}` failed its checksum")]
    Checksum(&'static str),

    #[error("index file version {found} is not supported (expected {expected})")]
    Version { found: u16, expected: u16 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
