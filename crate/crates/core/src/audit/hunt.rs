//! Searching for a profitable deviation from Flip-and-Match.
//!
//! Every candidate is recomputed from scratch before it is reported: both
//! coin outcomes by enumeration, the second stage by enumeration, utilities
//! counted directly. A candidate that fails the recheck is counted but not
//! reported as a certificate.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::exhaustive_tier;
use crate::error::Result;
use crate::generate::random_graph;
use crate::graph::{AgentId, LabeledGraph, VertexId};
use crate::mechanisms::{flip_and_match_reference, FlipAndMatch, OutcomeDistribution};
use crate::solvers::enumerate_maximum_matchings;
use crate::strategy::{verify_sp, SpViolation};
use crate::Limits;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HuntParams {
    /// Exhaustive tier: all connected two-agent graphs up to this size.
    pub exhaustive_max_vertices: usize,
    /// Random tier size; instance `i` uses seed `seed + i`.
    pub random_count: usize,
    pub random_max_vertices: u32,
    pub seed: u64,
}

impl Default for HuntParams {
    fn default() -> Self {
        HuntParams {
            exhaustive_max_vertices: 6,
            random_count: 0,
            random_max_vertices: 10,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub instance_id: String,
    pub graph: LabeledGraph,
    pub violation: SpViolation,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HuntReport {
    pub graphs_checked: usize,
    pub deviations_checked: usize,
    /// Candidates that did not survive the independent recheck.
    pub rejected: usize,
    pub certificates: Vec<Certificate>,
}

impl HuntReport {
    pub fn none_found(&self) -> bool {
        self.certificates.is_empty()
    }
}

fn hunt_instance(i: usize, params: &HuntParams) -> (String, LabeledGraph) {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed.wrapping_add(i as u64));
    let vertices = rng.gen_range(2..=params.random_max_vertices.max(2));
    let p = [0.2, 0.5, 0.8][i % 3];
    let g = random_graph(&mut rng, vertices, 2, p).expect("valid parameters");
    (format!("hunt-{i:05}"), g)
}

pub fn hunt_flip_sp(params: &HuntParams, limits: &Limits) -> Result<HuntReport> {
    let mut report = HuntReport::default();
    let exhaustive = exhaustive_tier(params.exhaustive_max_vertices, &[2])
        .into_iter()
        .map(|c| (c.id, c.graph));
    let random = (0..params.random_count).map(|i| hunt_instance(i, params));
    for (id, graph) in exhaustive.chain(random) {
        report.graphs_checked += 1;
        report.deviations_checked += (1..=2)
            .map(|a| (1usize << graph.agent_vertices(a).len()) - 1)
            .sum::<usize>();
        for violation in verify_sp(&graph, &FlipAndMatch, limits)? {
            if reverify_flip_violation(&graph, &violation, limits)? {
                report.certificates.push(Certificate {
                    instance_id: id.clone(),
                    graph: graph.clone(),
                    violation,
                });
            } else {
                report.rejected += 1;
            }
        }
    }
    Ok(report)
}

fn expected_own(graph: &LabeledGraph, dist: &OutcomeDistribution, agent: AgentId) -> BigRational {
    let mut total = BigRational::zero();
    for o in dist.outcomes() {
        let mine = o
            .matching
            .matched_vertices()
            .into_iter()
            .filter(|&v| graph.owner(v) == Some(agent))
            .count();
        total += &o.probability * BigInt::from(mine);
    }
    total
}

/// Recomputes both utilities of `violation` without the weighted solvers
/// and confirms the strict gain.
pub fn reverify_flip_violation(graph: &LabeledGraph, violation: &SpViolation, limits: &Limits) -> Result<bool> {
    let agent = violation.agent;
    let truthful = expected_own(graph, &flip_and_match_reference(graph, limits)?, agent);
    let reported = graph.without(&violation.hidden)?;
    let first = flip_and_match_reference(&reported, limits)?;
    let mut deviation = expected_own(&reported, &first, agent);
    for o in first.outcomes() {
        let private: BTreeSet<VertexId> = violation
            .hidden
            .iter()
            .copied()
            .chain(
                reported
                    .agent_vertices(agent)
                    .into_iter()
                    .filter(|&v| !o.matching.covers(v)),
            )
            .collect();
        let second = graph.induced_subgraph(&private)?;
        let size = enumerate_maximum_matchings(&second, limits)?
            .first()
            .map_or(0, |m| m.len());
        deviation += &o.probability * BigInt::from(2 * size);
    }
    Ok(truthful == violation.truthful && deviation == violation.deviation && deviation > truthful)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_exhaustive_tier_finds_nothing() {
        let params = HuntParams {
            exhaustive_max_vertices: 4,
            random_count: 20,
            random_max_vertices: 6,
            seed: 3,
        };
        let report = hunt_flip_sp(&params, &Limits::default()).unwrap();
        assert!(report.none_found(), "{:?}", report.certificates);
        assert_eq!(report.rejected, 0);
        assert!(report.graphs_checked > 20);
    }

    #[test]
    fn reverification_rejects_a_fabricated_gain() {
        let g = crate::figures::figure("fig1a").unwrap();
        let fake = SpViolation {
            agent: 1,
            hidden: [5, 6].into_iter().collect(),
            truthful: BigRational::from_integer(3.into()),
            deviation: BigRational::from_integer(4.into()),
        };
        assert!(!reverify_flip_violation(&g, &fake, &Limits::default()).unwrap());
    }
}
