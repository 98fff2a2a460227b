//! Exact maximum-cardinality and maximum-weight matching, plus the
//! brute-force enumeration used as an oracle on small instances.
//!
//! Every solver returns the canonical optimum: among optimal matchings, the
//! one whose sorted edge list is lexicographically smallest.

mod blossom;
pub mod brute;

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::graph::{AgentId, Edge, LabeledGraph, Matching, VertexId};

pub use brute::{all_matchings, brute_force_max_weight, enumerate_maximum_matchings, for_each_matching};

/// Non-negative integer weight per edge. Edges of the graph that carry no
/// entry weigh zero.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WeightAssignment(BTreeMap<Edge, BigUint>);

impl WeightAssignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, e: Edge, w: impl Into<BigUint>) {
        self.0.insert(e, w.into());
    }

    pub fn get(&self, e: Edge) -> Option<&BigUint> {
        self.0.get(&e)
    }

    pub fn weight_of(&self, e: Edge) -> BigUint {
        self.0.get(&e).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Edge, &BigUint)> {
        self.0.iter().map(|(&e, w)| (e, w))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Unit weight on every edge of `graph`.
    pub fn unit(graph: &LabeledGraph) -> Self {
        WeightAssignment(graph.edges().iter().map(|&e| (e, BigUint::from(1u32))).collect())
    }

    pub fn total(&self, matching: &Matching) -> BigUint {
        matching.edges().iter().map(|&e| self.weight_of(e)).sum()
    }

    /// Every weighted edge exists in `graph`.
    pub fn check_on(&self, graph: &LabeledGraph) -> Result<()> {
        match self.0.keys().find(|&&e| !graph.has_edge(e)) {
            Some(&e) => Err(Error::EdgeNotInGraph(e)),
            None => Ok(()),
        }
    }
}

impl FromIterator<(Edge, BigUint)> for WeightAssignment {
    fn from_iter<I: IntoIterator<Item = (Edge, BigUint)>>(iter: I) -> Self {
        WeightAssignment(iter.into_iter().collect())
    }
}

/// Canonical maximum-cardinality matching.
pub fn max_cardinality_matching(graph: &LabeledGraph) -> Matching {
    let unit: Vec<(Edge, BigUint)> = graph
        .edges()
        .iter()
        .map(|&e| (e, BigUint::from(1u32)))
        .collect();
    solve_positive_canonical(&unit)
}

/// Canonical maximum-weight matching.
pub fn max_weight_matching(graph: &LabeledGraph, weights: &WeightAssignment) -> Result<Matching> {
    weights.check_on(graph)?;
    let all: Vec<(Edge, BigUint)> = graph
        .edges()
        .iter()
        .map(|&e| (e, weights.weight_of(e)))
        .collect();
    if all.iter().all(|(_, w)| !w.is_zero()) {
        Ok(solve_positive_canonical(&all))
    } else {
        Ok(canonical_with_zero_weights(&all))
    }
}

/// `ν_i`: size of a maximum matching inside the vertex set of `agent`.
pub fn max_internal_matching_size(graph: &LabeledGraph, agent: AgentId) -> Result<usize> {
    graph.check_agent(agent)?;
    Ok(max_cardinality_matching(&graph.agent_subgraph(agent)).len())
}

/// Canonical optimum when every listed edge has positive weight.
///
/// With positive weights no optimal matching is a proper subset of another,
/// so "lexicographically smallest sorted edge list" coincides with "contains
/// the smallest edge on which two optima differ". That preference is encoded
/// exactly by shifting each weight left by `m` bits and adding `2^(m-1-r)`
/// for the edge of rank `r`: the perturbation totals less than one unit of
/// the original weight.
pub(crate) fn solve_positive_canonical(weighted: &[(Edge, BigUint)]) -> Matching {
    debug_assert!(weighted.windows(2).all(|w| w[0].0 < w[1].0));
    debug_assert!(weighted.iter().all(|(_, w)| !w.is_zero()));
    let m = weighted.len();
    let perturbed: Vec<(Edge, BigUint)> = weighted
        .iter()
        .enumerate()
        .map(|(r, (e, w))| (*e, (w << m) + (BigUint::from(1u32) << (m - 1 - r))))
        .collect();
    solve_raw(&perturbed)
}

/// Some maximum-weight matching; ties are resolved however the solver lands.
fn solve_raw(weighted: &[(Edge, BigUint)]) -> Matching {
    if weighted.is_empty() {
        return Matching::empty();
    }
    let mut index: BTreeMap<VertexId, usize> = BTreeMap::new();
    for (e, _) in weighted {
        for v in [e.lo(), e.hi()] {
            let next = index.len();
            index.entry(v).or_insert(next);
        }
    }
    let mut ids = vec![0; index.len()];
    for (&v, &i) in &index {
        ids[i] = v;
    }
    let bits = weighted.iter().map(|(_, w)| w.bits()).max().unwrap_or(0);
    let n = index.len();
    let ends = |e: &Edge| (index[&e.lo()], index[&e.hi()]);
    // Duals stay within a small multiple of the largest weight; leave headroom.
    let mate = if bits <= 58 {
        let edges: Vec<(usize, usize, i64)> = weighted
            .iter()
            .map(|(e, w)| {
                let (i, j) = ends(e);
                (i, j, w.to_i64().unwrap())
            })
            .collect();
        blossom::max_weight_mate(n, &edges)
    } else if bits <= 122 {
        let edges: Vec<(usize, usize, i128)> = weighted
            .iter()
            .map(|(e, w)| {
                let (i, j) = ends(e);
                (i, j, w.to_i128().unwrap())
            })
            .collect();
        blossom::max_weight_mate(n, &edges)
    } else {
        let edges: Vec<(usize, usize, BigInt)> = weighted
            .iter()
            .map(|(e, w)| {
                let (i, j) = ends(e);
                (i, j, BigInt::from(w.clone()))
            })
            .collect();
        blossom::max_weight_mate(n, &edges)
    };
    let edges = mate
        .iter()
        .enumerate()
        .filter_map(|(i, &m)| match m {
            Some(j) if i < j => Some(Edge::new(ids[i], ids[j])),
            _ => None,
        })
        .collect();
    Matching::from_edges_unchecked(edges)
}

fn optimum_value(weighted: &[(Edge, BigUint)]) -> BigUint {
    let positive: Vec<(Edge, BigUint)> = weighted.iter().filter(|(_, w)| !w.is_zero()).cloned().collect();
    let m = solve_raw(&positive);
    let lookup: BTreeMap<Edge, &BigUint> = positive.iter().map(|(e, w)| (*e, w)).collect();
    m.edges().iter().map(|e| lookup[e].clone()).sum()
}

/// Canonical optimum when some edges weigh zero. A zero-weight edge may still
/// belong to the lexicographically smallest optimum (it can precede the rest),
/// so the edge list is fixed greedily, one position at a time.
fn canonical_with_zero_weights(all: &[(Edge, BigUint)]) -> Matching {
    let target = optimum_value(all);
    let mut chosen: Vec<Edge> = Vec::new();
    let mut used: BTreeSet<VertexId> = BTreeSet::new();
    let mut acc = BigUint::zero();
    let mut start = 0;
    while acc != target {
        let mut next = None;
        for idx in start..all.len() {
            let (e, ref w) = all[idx];
            if used.contains(&e.lo()) || used.contains(&e.hi()) {
                continue;
            }
            let residual: Vec<(Edge, BigUint)> = all[idx + 1..]
                .iter()
                .filter(|(f, _)| {
                    !used.contains(&f.lo()) && !used.contains(&f.hi()) && !f.touches(e.lo()) && !f.touches(e.hi())
                })
                .cloned()
                .collect();
            if &acc + w + optimum_value(&residual) == target {
                chosen.push(e);
                used.insert(e.lo());
                used.insert(e.hi());
                acc += w;
                next = Some(idx + 1);
                break;
            }
        }
        start = next.expect("optimum value is not attainable from the current prefix");
    }
    Matching::from_edges_unchecked(chosen)
}
