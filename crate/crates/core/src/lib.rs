//! Strategyproof matching mechanisms for agent-labeled graphs.
//!
//! Each agent privately owns a set of vertices and wants as many of them
//! matched as possible. An agent may hide vertices from the mechanism and
//! match them afterwards among themselves and its leftover vertices. This
//! crate implements mechanisms that remove the incentive to do so
//! (`Match_Π`, Mix-and-Match, Flip-and-Match), an exhaustive deviation
//! checker, and audits of their approximation ratios, all in exact
//! arithmetic.

pub mod audit;
pub mod corpus;
pub mod error;
pub mod figures;
pub mod generate;
pub mod graph;
pub mod io;
pub mod mechanisms;
pub mod solvers;
pub mod strategy;

pub use error::{Error, Result};
pub use graph::{
    partition_counts, symmetric_difference, utilities, utility, AgentId, AlternatingComponent,
    AlternatingDecomposition, Edge, LabeledGraph, Matching, PartitionCounts, Side, UtilityVector, VertexId,
    Violation,
};
pub use mechanisms::{
    Bipartition, FlipAndMatch, FlipAndMatchReference, MatchPi, MatchPiReference, Mechanism, MechanismKind,
    MixAndMatch, MixMode, NaiveSerial, OptimalMechanism, Outcome, OutcomeDistribution, PriorityOrder,
};

/// Environment variable overriding [`Limits::oracle_vertices`].
pub const ORACLE_BOUND_ENV: &str = "MECHMATCH_ORACLE_BOUND";

/// Size caps for exhaustive work.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest vertex count accepted by brute-force enumeration.
    pub oracle_vertices: usize,
    /// Largest agent count for exact enumeration of all bipartitions.
    pub exact_agents: u32,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            oracle_vertices: 16,
            exact_agents: 20,
        }
    }
}

impl Limits {
    /// Defaults, with the oracle bound taken from `MECHMATCH_ORACLE_BOUND`
    /// when it is set.
    pub fn from_env() -> Result<Self> {
        let mut limits = Limits::default();
        if let Ok(raw) = std::env::var(ORACLE_BOUND_ENV) {
            limits.oracle_vertices = raw
                .trim()
                .parse()
                .map_err(|_| Error::Parameter(format!("{ORACLE_BOUND_ENV}={raw:?} is not a vertex count")))?;
        }
        Ok(limits)
    }

    pub fn with_oracle(self, oracle_vertices: usize) -> Self {
        Limits {
            oracle_vertices,
            ..self
        }
    }

    pub fn check_oracle(&self, graph: &LabeledGraph) -> Result<()> {
        if graph.vertex_count() > self.oracle_vertices {
            Err(Error::OracleBound {
                vertices: graph.vertex_count(),
                bound: self.oracle_vertices,
            })
        } else {
            Ok(())
        }
    }

    pub fn check_agents(&self, graph: &LabeledGraph) -> Result<()> {
        if graph.num_agents() > self.exact_agents {
            Err(Error::AgentBound {
                agents: graph.num_agents(),
                bound: self.exact_agents,
            })
        } else {
            Ok(())
        }
    }
}
