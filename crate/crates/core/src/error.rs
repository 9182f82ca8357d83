use thiserror::Error;

use crate::graph::Vertex;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: malformed edge `{text}`")]
    MalformedEdge { line: usize, text: String },
    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),
    #[error("vertex {vertex} out of range (graph has {vertex_count} vertices)")]
    VertexOutOfRange { vertex: Vertex, vertex_count: usize },
    #[error("graph is disconnected")]
    Disconnected,
    #[error("invalid graph family: {0}")]
    InvalidFamily(String),
    #[error("edge ({0}, {1}) is not a bridge")]
    NotABridge(Vertex, Vertex),
    #[error("edge ({0}, {1}) is not in the graph")]
    MissingEdge(Vertex, Vertex),
    #[error("{what} exceeds limit {limit}")]
    TooLarge { what: &'static str, limit: usize },
    #[error("budget exceeded: {what} > {limit}")]
    BudgetExceeded { what: &'static str, limit: usize },
    #[error("invalid agent count {agents} for a graph with {vertex_count} vertices")]
    AgentCount { agents: usize, vertex_count: usize },
    #[error("subgraph is not a connected spanning subgraph")]
    NotSpanning,
    #[error("illegal move: agent slot {slot} cannot go from {from} to {to}")]
    IllegalMove {
        slot: usize,
        from: Vertex,
        to: Vertex,
    },
    #[error("move vector has {got} entries, expected {expected}")]
    MoveArity { got: usize, expected: usize },
    #[error("strategy precondition violated: {0}")]
    Precondition(String),
    #[error("state outside strategy domain: {0}")]
    OutsideDomain(String),
    #[error("io error on {path}: {message}")]
    Io { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
