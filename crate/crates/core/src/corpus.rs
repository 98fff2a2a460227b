//! The versioned test corpus.
//!
//! Exhaustive tier: every connected graph on 1 to 6 vertices up to
//! isomorphism, with every owner assignment for `n` agents up to the
//! graph's automorphisms (so up to owner-preserving isomorphism). Agents
//! may own no vertex.
//!
//! Random tier: instance `i` uses `ChaCha8Rng::seed_from_u64(seed + i)` to
//! draw `|V|` in `2..=10` and `n` in `2..=4`, then a [`random_graph`] with
//! `p = [0.2, 0.5, 0.8][i % 3]` from the same stream.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::generate::random_graph;
use crate::graph::{AgentId, LabeledGraph, VertexId};

/// Bumped whenever the definition above changes.
pub const CORPUS_VERSION: u32 = 1;
pub const RANDOM_TIER_SEED: u64 = 20_240_601;
pub const RANDOM_TIER_SIZE: usize = 10_000;
pub const EXHAUSTIVE_MAX_VERTICES: usize = 6;
const RANDOM_PROBABILITIES: [f64; 3] = [0.2, 0.5, 0.8];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusInstance {
    pub id: String,
    pub graph: LabeledGraph,
}

/// Edge lists of one graph per isomorphism class of connected graphs on
/// `k` vertices, labeled `0..k`, with their automorphisms.
struct GraphClass {
    edges: Vec<(usize, usize)>,
    automorphisms: Vec<Vec<usize>>,
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                go(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; k], &mut out);
    out
}

fn connected(k: usize, pairs: &[(usize, usize)], mask: u32) -> bool {
    let mut seen = 1u32;
    let mut grew = true;
    while grew {
        grew = false;
        for (idx, &(a, b)) in pairs.iter().enumerate() {
            if mask >> idx & 1 == 1 && (seen >> a & 1) != (seen >> b & 1) {
                seen |= 1 << a | 1 << b;
                grew = true;
            }
        }
    }
    seen == (1u32 << k) - 1
}

fn graph_classes(k: usize) -> Vec<GraphClass> {
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|a| (a + 1..k).map(move |b| (a, b))).collect();
    let index = |a: usize, b: usize| {
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        pairs.iter().position(|&p| p == (a, b)).unwrap()
    };
    let perms = permutations(k);
    // For each permutation, where each pair index goes.
    let images: Vec<Vec<usize>> = perms
        .iter()
        .map(|p| pairs.iter().map(|&(a, b)| index(p[a], p[b])).collect())
        .collect();
    let relabel = |mask: u32, image: &[usize]| {
        let mut out = 0u32;
        for (idx, &to) in image.iter().enumerate() {
            if mask >> idx & 1 == 1 {
                out |= 1 << to;
            }
        }
        out
    };
    let mut classes = Vec::new();
    for mask in 0..1u32 << pairs.len() {
        if !connected(k, &pairs, mask) {
            continue;
        }
        // Keep the smallest mask of each class.
        if images.iter().any(|image| relabel(mask, image) < mask) {
            continue;
        }
        let automorphisms = perms
            .iter()
            .zip(&images)
            .filter(|(_, image)| relabel(mask, image) == mask)
            .map(|(p, _)| p.clone())
            .collect();
        let edges = (0..pairs.len()).filter(|&i| mask >> i & 1 == 1).map(|i| pairs[i]).collect();
        classes.push(GraphClass { edges, automorphisms });
    }
    classes
}

/// The exhaustive tier for the given agent counts, ordered by agent count,
/// then vertex count, then graph class, then owner assignment.
pub fn exhaustive_tier(max_vertices: usize, agent_counts: &[u32]) -> Vec<CorpusInstance> {
    assert!(max_vertices <= 7, "exhaustive tier is only defined for small graphs");
    let classes: Vec<Vec<GraphClass>> = (1..=max_vertices).map(graph_classes).collect();
    let mut out = Vec::new();
    for &n in agent_counts {
        for (k, classes) in (1..=max_vertices).zip(&classes) {
            let mut idx = 0;
            for class in classes {
                for code in 0..(n as u64).pow(k as u32) {
                    let owners = decode(code, n, k);
                    // Skip owner vectors that an automorphism maps to a smaller one.
                    let minimal = class.automorphisms.iter().all(|p| {
                        let mut moved = vec![0; k];
                        for v in 0..k {
                            moved[p[v]] = owners[v];
                        }
                        moved >= owners
                    });
                    if !minimal {
                        continue;
                    }
                    let edges = class.edges.iter().map(|&(a, b)| (a as VertexId + 1, b as VertexId + 1));
                    let graph = LabeledGraph::from_owners(n, &owners, edges).expect("corpus graphs are valid");
                    out.push(CorpusInstance {
                        id: format!("ex-n{n}-v{k}-{idx:05}"),
                        graph,
                    });
                    idx += 1;
                }
            }
        }
    }
    out
}

/// Owners as base-`n` digits, most significant first, shifted to `1..=n`.
fn decode(mut code: u64, n: u32, k: usize) -> Vec<AgentId> {
    let mut owners = vec![0; k];
    for slot in owners.iter_mut().rev() {
        *slot = (code % n as u64) as AgentId + 1;
        code /= n as u64;
    }
    owners
}

pub fn random_instance(i: usize, base_seed: u64) -> CorpusInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(base_seed.wrapping_add(i as u64));
    let vertices = rng.gen_range(2..=10);
    let agents = rng.gen_range(2..=4);
    let p = RANDOM_PROBABILITIES[i % RANDOM_PROBABILITIES.len()];
    CorpusInstance {
        id: format!("rnd-{i:05}"),
        graph: random_graph(&mut rng, vertices, agents, p).expect("valid parameters"),
    }
}

pub fn random_tier(count: usize, base_seed: u64) -> impl Iterator<Item = CorpusInstance> {
    (0..count).map(move |i| random_instance(i, base_seed))
}

/// Which parts of the corpus to materialize.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tier {
    Exhaustive,
    Random,
    All,
}

/// The standard corpus: exhaustive tier for two and three agents, then the
/// random tier.
pub fn standard(tier: Tier) -> Vec<CorpusInstance> {
    let mut out = Vec::new();
    if tier != Tier::Random {
        out.extend(exhaustive_tier(EXHAUSTIVE_MAX_VERTICES, &[2, 3]));
    }
    if tier != Tier::Exhaustive {
        out.extend(random_tier(RANDOM_TIER_SIZE, RANDOM_TIER_SEED));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn connected_graph_counts() {
        // OEIS A001349.
        let counts: Vec<usize> = (1..=6).map(|k| graph_classes(k).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 6, 21, 112]);
    }

    #[test]
    fn two_vertex_colorings() {
        // A single edge with two agents: owners (1,1), (1,2), (2,2).
        let tier = exhaustive_tier(2, &[2]);
        let two: Vec<_> = tier.iter().filter(|c| c.graph.vertex_count() == 2).collect();
        assert_eq!(two.len(), 3);
    }

    #[test]
    fn colorings_of_a_triangle_and_a_path() {
        // Burnside: triangle colorings under S3 with 3 colors = 10; the
        // 3-path under its flip = (27 + 9) / 2 = 18.
        let tier = exhaustive_tier(3, &[3]);
        let three = tier.iter().filter(|c| c.graph.vertex_count() == 3).count();
        assert_eq!(three, 28);
    }

    #[test]
    fn random_tier_is_stable() {
        let a: Vec<_> = random_tier(30, 5).collect();
        let b: Vec<_> = random_tier(30, 5).collect();
        assert_eq!(a, b);
        for inst in &a {
            let g = &inst.graph;
            assert!((2..=10).contains(&g.vertex_count()));
            assert!((2..=4).contains(&g.num_agents()));
        }
    }
}
