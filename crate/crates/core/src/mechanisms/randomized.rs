//! Mix-and-Match and Flip-and-Match.

use num_bigint::BigUint;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Edge, LabeledGraph, Matching};
use crate::mechanisms::{match_pi, match_pi_reference, Bipartition, MixMode, OutcomeDistribution};
use crate::solvers::{enumerate_maximum_matchings, solve_positive_canonical};
use crate::Limits;

/// The bipartition drawn in sampled mode. The stream is
/// `ChaCha8Rng::seed_from_u64(seed)`; agent `i` takes the `i`-th `next_u32`
/// and goes to `Π2` when its lowest bit is set.
pub fn sampled_bipartition(num_agents: u32, seed: u64) -> Bipartition {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let side1: Vec<u32> = (1..=num_agents).filter(|_| rng.next_u32() & 1 == 0).collect();
    Bipartition::new(num_agents, side1).expect("agents drawn from range")
}

/// Flip a fair coin per agent for its side, then run `Match_Π`.
pub fn mix_and_match(graph: &LabeledGraph, mode: MixMode, limits: &Limits) -> Result<OutcomeDistribution> {
    let n = graph.num_agents();
    match mode {
        MixMode::Sampled(seed) => {
            let bip = sampled_bipartition(n, seed);
            let m = match_pi(graph, &bip)?;
            let mut dist = OutcomeDistribution::point(m);
            dist.outcomes[0].label = bip.to_string();
            Ok(dist)
        }
        MixMode::Exact => {
            limits.check_agents(graph)?;
            let entries = Bipartition::all(n)
                .map(|bip| Ok((bip.to_string(), match_pi(graph, &bip)?)))
                .collect::<Result<Vec<_>>>()?;
            Ok(OutcomeDistribution::uniform(entries))
        }
    }
}

fn require_two_agents(graph: &LabeledGraph) -> Result<()> {
    if graph.num_agents() != 2 {
        return Err(Error::UnsupportedAgentCount {
            expected: 2,
            actual: graph.num_agents(),
        });
    }
    Ok(())
}

/// The second coin outcome of Flip-and-Match: a maximum-cardinality
/// matching with as many internal edges as possible, canonical among ties.
/// Weights `K+1` (internal) and `K` (external) with `K = |V| + 1` make one
/// extra edge worth more than any number of internal upgrades.
pub fn flip_branch_b(graph: &LabeledGraph) -> Matching {
    let k = graph.vertex_count() as u64 + 1;
    let weighted: Vec<(Edge, BigUint)> = graph
        .edges()
        .iter()
        .map(|&e| (e, BigUint::from(if graph.is_internal(e) { k + 1 } else { k })))
        .collect();
    solve_positive_canonical(&weighted)
}

fn flip(a: Matching, b: Matching) -> OutcomeDistribution {
    OutcomeDistribution::uniform(vec![("match_pi".into(), a), ("max_internal".into(), b)])
}

/// Two agents only: with probability 1/2 `Match_({1},{2})`, otherwise
/// [`flip_branch_b`].
pub fn flip_and_match(graph: &LabeledGraph) -> Result<OutcomeDistribution> {
    require_two_agents(graph)?;
    let a = match_pi(graph, &Bipartition::new(2, [1])?)?;
    Ok(flip(a, flip_branch_b(graph)))
}

/// Flip-and-Match with both branches found by enumeration.
pub fn flip_and_match_reference(graph: &LabeledGraph, limits: &Limits) -> Result<OutcomeDistribution> {
    require_two_agents(graph)?;
    let a = match_pi_reference(graph, &Bipartition::new(2, [1])?, limits)?;
    let internal = |m: &Matching| m.edges().iter().filter(|&&e| graph.is_internal(e)).count();
    // Maximum matchings come sorted, so the first with the most internal
    // edges is the canonical one.
    let all = enumerate_maximum_matchings(graph, limits)?;
    let most = all.iter().map(internal).max().unwrap_or(0);
    let b = all.into_iter().find(|m| internal(m) == most).unwrap_or_default();
    Ok(flip(a, b))
}
