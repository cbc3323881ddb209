use alloc::string::String;

use crate::graph::VertexId;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("graph has no vertices")]
    EmptyVertexSet,
    #[error("vertex {0} is declared more than once")]
    DuplicateVertex(VertexId),
    #[error("edge ({0}, {1}) references an undeclared vertex")]
    DanglingEdgeEndpoint(VertexId, VertexId),
    #[error("vertex {0} is not part of the graph")]
    UnknownVertex(VertexId),
    #[error("graph contains a directed cycle")]
    CycleDetected,
    #[error("graph has {0} vertices without incoming edges")]
    MultipleSources(usize),
    #[error("graph has {0} vertices without outgoing edges")]
    MultipleTargets(usize),
    #[error("edge ({0}, {1}) is redundant")]
    RedundantEdge(VertexId, VertexId),
    #[error("edge set is empty")]
    EmptyEdgeSet,
    #[error("edge ({0}, {1}) is not in the graph")]
    EdgeNotInGraph(VertexId, VertexId),
    #[error("path is not stored")]
    PathNotFound,
    #[error("projected {projected} stored paths exceed the cap of {cap}")]
    ResourceCap { projected: u128, cap: u64 },
    #[error("vertex set does not induce a cluster: {0}")]
    NotACluster(&'static str),
    #[error("invalid generator parameters: {0}")]
    InvalidParams(String),
    #[error("gave up after {attempts} attempts with {added} of {requested} disruptive edges placed")]
    DisruptiveEdgeExhausted {
        added: usize,
        requested: usize,
        attempts: usize,
    },
    #[error("graph has {vertices} vertices; exhaustive search is limited to {limit}")]
    TooLarge { vertices: usize, limit: usize },
}
