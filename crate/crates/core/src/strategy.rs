//! Single-agent deviations: hide some vertices, let the mechanism run on the
//! rest, then privately match the hidden vertices together with whatever the
//! mechanism left unmatched.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::graph::{utility_unchecked, AgentId, LabeledGraph, Matching, VertexId};
use crate::mechanisms::{Mechanism, OutcomeDistribution};
use crate::solvers::max_cardinality_matching;
use crate::Limits;

fn check_hidden(graph: &LabeledGraph, agent: AgentId, hidden: &BTreeSet<VertexId>) -> Result<()> {
    graph.check_agent(agent)?;
    for &v in hidden {
        match graph.owner(v) {
            None => return Err(Error::UnknownVertex(v)),
            Some(a) if a != agent => return Err(Error::NotOwned { vertex: v, agent }),
            Some(_) => {}
        }
    }
    Ok(())
}

/// The agent's vertices of `reported` that `first_stage` leaves unmatched.
pub fn leftover(reported: &LabeledGraph, agent: AgentId, first_stage: &Matching) -> BTreeSet<VertexId> {
    reported
        .agent_vertices(agent)
        .into_iter()
        .filter(|&v| !first_stage.covers(v))
        .collect()
}

/// Maximum-cardinality matching of `G[hidden ∪ X_i]`, where `X_i` is the
/// agent's vertices left unmatched by `first_stage` on `G[V ∖ hidden]`.
pub fn second_stage(
    graph: &LabeledGraph,
    agent: AgentId,
    hidden: &BTreeSet<VertexId>,
    first_stage: &Matching,
) -> Result<Matching> {
    check_hidden(graph, agent, hidden)?;
    let reported = graph.without(hidden)?;
    first_stage.check_on(&reported)?;
    let leftover = leftover(&reported, agent, first_stage);
    Ok(second_stage_unchecked(graph, hidden, &leftover))
}

fn second_stage_unchecked(
    graph: &LabeledGraph,
    hidden: &BTreeSet<VertexId>,
    leftover: &BTreeSet<VertexId>,
) -> Matching {
    if hidden.len() + leftover.len() < 2 {
        return Matching::empty();
    }
    max_cardinality_matching(&graph.restricted(|v| hidden.contains(&v) || leftover.contains(&v)))
}

/// Everything about one deviation, outcome by outcome.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeviationRecord {
    pub agent: AgentId,
    pub hidden: BTreeSet<VertexId>,
    /// The mechanism's distribution on `G[V ∖ hidden]`.
    pub first_stage: OutcomeDistribution,
    /// `X_i` per first-stage outcome.
    pub leftovers: Vec<BTreeSet<VertexId>>,
    pub second_stages: Vec<Matching>,
    /// Expected first-stage utility plus two per second-stage edge.
    pub total_utility: BigRational,
}

pub fn deviate(
    graph: &LabeledGraph,
    mechanism: &dyn Mechanism,
    agent: AgentId,
    hidden: &BTreeSet<VertexId>,
) -> Result<DeviationRecord> {
    check_hidden(graph, agent, hidden)?;
    let reported = graph.without(hidden)?;
    let first_stage = mechanism.outcomes(&reported)?;
    let mut leftovers = Vec::with_capacity(first_stage.len());
    let mut second_stages: Vec<Matching> = Vec::with_capacity(first_stage.len());
    let mut total = BigRational::zero();
    for (k, o) in first_stage.outcomes().iter().enumerate() {
        let x = leftover(&reported, agent, &o.matching);
        // Randomized mechanisms often repeat a matching across coin outcomes.
        let reuse = (0..k).find(|&j| first_stage.outcomes()[j].matching == o.matching);
        let second = match reuse {
            Some(j) => second_stages[j].clone(),
            None => second_stage_unchecked(graph, hidden, &x),
        };
        let u = utility_unchecked(&reported, &o.matching, agent) as usize + 2 * second.len();
        total += &o.probability * BigInt::from(u);
        leftovers.push(x);
        second_stages.push(second);
    }
    Ok(DeviationRecord {
        agent,
        hidden: hidden.clone(),
        first_stage,
        leftovers,
        second_stages,
        total_utility: total,
    })
}

/// Expected two-stage utility of `agent` after hiding `hidden`.
pub fn deviation_utility(
    graph: &LabeledGraph,
    mechanism: &dyn Mechanism,
    agent: AgentId,
    hidden: &BTreeSet<VertexId>,
) -> Result<BigRational> {
    Ok(deviate(graph, mechanism, agent, hidden)?.total_utility)
}

/// A strictly profitable deviation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpViolation {
    pub agent: AgentId,
    pub hidden: BTreeSet<VertexId>,
    pub truthful: BigRational,
    pub deviation: BigRational,
}

impl SpViolation {
    pub fn gain(&self) -> BigRational {
        &self.deviation - &self.truthful
    }
}

impl std::fmt::Display for SpViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let hidden: Vec<String> = self.hidden.iter().map(|v| format!("v{v}")).collect();
        write!(
            f,
            "agent {} hides {{{}}}: {} -> {}",
            self.agent,
            hidden.join(","),
            self.truthful,
            self.deviation
        )
    }
}

/// Every nonempty subset of `vertices`, in mask order: bit `k` of the mask
/// selects `vertices[k]`.
pub fn hide_sets(vertices: &[VertexId]) -> impl Iterator<Item = BTreeSet<VertexId>> + '_ {
    (1u64..1 << vertices.len()).map(move |mask| {
        vertices
            .iter()
            .enumerate()
            .filter(|&(k, _)| mask >> k & 1 == 1)
            .map(|(_, &v)| v)
            .collect()
    })
}

/// All strictly profitable single-agent deviations, by agent and then by
/// hide-set mask. Empty certifies the mechanism SP on this graph; hiding
/// everything doubles as the individual-rationality check.
pub fn verify_sp(graph: &LabeledGraph, mechanism: &dyn Mechanism, limits: &Limits) -> Result<Vec<SpViolation>> {
    if !mechanism.exact() {
        return Err(Error::NotDeterministic(format!(
            "{} samples one outcome and cannot certify strategyproofness",
            mechanism.name()
        )));
    }
    limits.check_oracle(graph)?;
    let truthful = mechanism.outcomes(graph)?;
    let mut violations = Vec::new();
    for agent in 1..=graph.num_agents() {
        let honest = truthful.expected_utility(graph, agent)?;
        let mine = graph.agent_vertices(agent);
        for hidden in hide_sets(&mine) {
            let deviation = deviation_utility(graph, mechanism, agent, &hidden)?;
            if deviation > honest {
                violations.push(SpViolation {
                    agent,
                    hidden,
                    truthful: honest.clone(),
                    deviation,
                });
            }
        }
    }
    Ok(violations)
}
