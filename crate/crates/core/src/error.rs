use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseRationalError {
    #[error("decimal value `{0}` not accepted; write it as p/q")]
    Decimal(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
    #[error("malformed rational `{0}`")]
    Malformed(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph has no vertices")]
    Empty,
    #[error("vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
    #[error("graph is disconnected: vertex {unreached} not reachable from vertex 0")]
    Disconnected { unreached: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HostError {
    #[error("host graph disconnected")]
    Disconnected,
    #[error("negative edge length on {0}-{1}")]
    NegativeLength(usize, usize),
    #[error("host edge {u}-{v} out of range for {n} nodes")]
    OutOfRange { u: usize, v: usize, n: usize },
    #[error("host graph is not a tree")]
    NotATree,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LayeringError {
    #[error("cluster {cluster} has no adjacent cluster in the previous layer")]
    Orphan { cluster: usize },
    #[error("cluster {cluster} is adjacent to clusters {first} and {second} in the previous layer")]
    MultipleParents {
        cluster: usize,
        first: usize,
        second: usize,
    },
}
