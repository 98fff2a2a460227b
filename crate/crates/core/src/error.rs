use thiserror::Error;

use crate::graph::{AgentId, Edge, VertexId, Violation};

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid graph: {}", join_violations(.0))]
    InvalidGraph(Vec<Violation>),

    #[error("unknown vertex v{0}")]
    UnknownVertex(VertexId),

    #[error("unknown agent {agent} (graph has {num_agents} agents)")]
    UnknownAgent { agent: AgentId, num_agents: u32 },

    #[error("edge {0} is not an edge of the graph")]
    EdgeNotInGraph(Edge),

    #[error("invalid matching: {0}")]
    InvalidMatching(String),

    #[error("vertex v{vertex} is not owned by agent {agent}")]
    NotOwned { vertex: VertexId, agent: AgentId },

    #[error("instance has {vertices} vertices, above the oracle bound of {bound}")]
    OracleBound { vertices: usize, bound: usize },

    #[error("instance has {agents} agents, above the exact-enumeration bound of {bound}")]
    AgentBound { agents: u32, bound: u32 },

    #[error("mechanism requires exactly {expected} agents, graph has {actual}")]
    UnsupportedAgentCount { expected: u32, actual: u32 },

    #[error("invalid bipartition: {0}")]
    InvalidBipartition(String),

    #[error("mechanism {0} is randomized; a deterministic mechanism is required")]
    NotDeterministic(String),

    #[error("{0}")]
    Schema(String),

    #[error("unknown figure {0:?}")]
    UnknownFigure(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("csv: {0}")]
    Csv(String),
}

fn join_violations(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}
