use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph has {0} vertices, at most 64 are supported")]
    TooManyVertices(usize),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("adjacency is not symmetric between {0} and {1}")]
    Asymmetric(usize, usize),
    #[error("graph6 parse error at byte {offset}: {reason}")]
    Graph6 { offset: usize, reason: String },
    #[error("edge list parse error on line {line}: {reason}")]
    EdgeList { line: usize, reason: String },
}

/// A computation was refused because its input exceeds a configured cap.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{what}: n = {n} exceeds the cap of {cap}")]
pub struct CapExceeded {
    pub what: &'static str,
    pub n: usize,
    pub cap: usize,
}

#[derive(Debug, Error)]
pub enum SamplerError {
    #[error("cannot condition on an even edge count: p = 1 and C({n},2) is odd")]
    ImpossibleParity { n: usize },
    #[error("edge probability {0} is outside [0, 1]")]
    BadProbability(f64),
    #[error("shared set of size {shared} does not fit in {n} vertices")]
    SharedTooLarge { shared: usize, n: usize },
    #[error("graph on {0} vertices exceeds the 64-vertex cap")]
    TooManyVertices(usize),
}

#[derive(Debug, Error)]
pub enum ResultsError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {reason}")]
    Format { path: PathBuf, reason: String },
}

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Sampler(#[from] SamplerError),
    #[error(transparent)]
    Cap(#[from] CapExceeded),
}
