//! `Match_Π`: internal edges first, no external edge inside a side, then
//! maximum cardinality, then serial tie-breaking in priority order.
//!
//! The fast path is a single weighted solve. With `k = |E|` and
//! `S = k^(2n+2)`, internal edges weigh `(k+3)·S` and an edge between
//! `i ∈ Π1` and `j ∈ Π2` weighs `S + S/k^(i+1) + S/k^(j+n+2)`. Every tier of
//! that weight dominates the sum of the tiers below it, so a maximum-weight
//! matching is exactly the lexicographic optimum.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::Result;
use crate::graph::{AgentId, Edge, LabeledGraph, Matching};
use crate::mechanisms::{Bipartition, PriorityOrder};
use crate::solvers::{for_each_matching, max_internal_matching_size, solve_positive_canonical, WeightAssignment};
use crate::Limits;

fn internal_sizes(graph: &LabeledGraph) -> Vec<usize> {
    (1..=graph.num_agents())
        .map(|a| max_internal_matching_size(graph, a).expect("agent in range"))
        .collect()
}

/// `|M_ii| = ν_i` for every agent and no external edge of `M` joins two
/// agents on the same side. False when `matching` is not a matching of
/// `graph` or `bipartition` has the wrong number of agents.
pub fn is_feasible(graph: &LabeledGraph, matching: &Matching, bipartition: &Bipartition) -> bool {
    if matching.check_on(graph).is_err() || bipartition.check_for(graph).is_err() {
        return false;
    }
    let nu = internal_sizes(graph);
    let mut internal = vec![0; nu.len()];
    for &e in matching.edges() {
        let (a, b) = graph.edge_owners(e);
        if a == b {
            internal[a as usize - 1] += 1;
        } else if bipartition.same_side(a, b) {
            return false;
        }
    }
    internal == nu
}

/// Exhaustive search over matchings using only edges accepted by `allowed`.
/// Among those with `|M_ii| = ν_i` it maximizes `|M|`, then the utilities
/// in `priority` order, then takes the smallest sorted edge list.
fn serial_reference(
    graph: &LabeledGraph,
    allowed: impl Fn(AgentId, AgentId) -> bool,
    priority: &PriorityOrder,
    limits: &Limits,
) -> Result<Matching> {
    limits.check_oracle(graph)?;
    let nu = internal_sizes(graph);
    let n = nu.len();
    let solve_graph = graph.with_edges_where(|e| {
        let (a, b) = graph.edge_owners(e);
        a == b || allowed(a, b)
    });
    let mut best: Option<(usize, Vec<u32>, Matching)> = None;
    let mut internal = vec![0usize; n];
    let mut u = vec![0u32; n];
    for_each_matching(&solve_graph, limits, |edges| {
        internal.iter_mut().for_each(|x| *x = 0);
        u.iter_mut().for_each(|x| *x = 0);
        for &e in edges {
            let (a, b) = graph.edge_owners(e);
            u[a as usize - 1] += 1;
            u[b as usize - 1] += 1;
            if a == b {
                internal[a as usize - 1] += 1;
            }
        }
        if internal != nu {
            return;
        }
        let key: Vec<u32> = priority.agents().iter().map(|&a| u[a as usize - 1]).collect();
        let replace = match &best {
            None => true,
            Some((size, bkey, bm)) => match (edges.len(), &key).cmp(&(*size, bkey)) {
                std::cmp::Ordering::Greater => true,
                std::cmp::Ordering::Less => false,
                std::cmp::Ordering::Equal => Matching::from_edges_unchecked(edges.to_vec()) < *bm,
            },
        };
        if replace {
            best = Some((edges.len(), key, Matching::from_edges_unchecked(edges.to_vec())));
        }
    })?;
    Ok(best.expect("the union of internal maximum matchings is feasible").2)
}

/// `Match_Π` by exhaustive search over all matchings.
pub fn match_pi_reference(graph: &LabeledGraph, bipartition: &Bipartition, limits: &Limits) -> Result<Matching> {
    bipartition.check_for(graph)?;
    serial_reference(graph, |a, b| !bipartition.same_side(a, b), &bipartition.priority(), limits)
}

/// The naive serial mechanism: like `Match_Π` but with every external edge
/// allowed and priority `1, 2, …, n`. Oracle-scale only.
pub fn naive_serial(graph: &LabeledGraph, limits: &Limits) -> Result<Matching> {
    serial_reference(graph, |_, _| true, &PriorityOrder::ascending(graph.num_agents()), limits)
}

/// Reduction weights for `Match_Π`, scaled to integers. Edges joining two
/// agents on the same side get no entry: they must be removed from the
/// solve, not weighted zero.
pub fn match_pi_weights(graph: &LabeledGraph, bipartition: &Bipartition) -> Result<WeightAssignment> {
    bipartition.check_for(graph)?;
    let k = graph.edge_count() as u32;
    let mut weights = WeightAssignment::new();
    if k == 0 {
        return Ok(weights);
    }
    let n = graph.num_agents();
    let base = BigUint::from(k);
    let s = base.pow(2 * n + 2);
    let internal = BigUint::from(k + 3) * &s;
    // Π1 agent i contributes S/k^(i+1); Π2 agent j contributes S/k^(j+n+2).
    let bonus: Vec<BigUint> = (1..=n)
        .map(|a| {
            let exp = if bipartition.in_first(a) { a + 1 } else { a + n + 2 };
            base.pow(2 * n + 2 - exp)
        })
        .collect();
    for &e in graph.edges() {
        let (a, b) = graph.edge_owners(e);
        if a == b {
            weights.insert(e, internal.clone());
        } else if !bipartition.same_side(a, b) {
            weights.insert(e, &s + &bonus[a as usize - 1] + &bonus[b as usize - 1]);
        }
    }
    Ok(weights)
}

/// One internal edge outweighs all cross edges together. Vacuous without
/// edges.
pub fn internal_weight_dominates(graph: &LabeledGraph, bipartition: &Bipartition) -> Result<bool> {
    let weights = match_pi_weights(graph, bipartition)?;
    if graph.edge_count() == 0 {
        return Ok(true);
    }
    let k = graph.edge_count() as u32;
    let s = BigUint::from(k).pow(2 * graph.num_agents() + 2);
    let internal = BigUint::from(k + 3) * s;
    let cross: BigUint = weights
        .iter()
        .filter(|&(e, _)| !graph.is_internal(e))
        .map(|(_, w)| w.clone())
        .sum();
    Ok(internal > cross)
}

/// `Match_Π` through one maximum-weight solve on the graph without
/// same-side external edges. Graphs with at most one edge go to the
/// exhaustive search directly.
pub fn match_pi(graph: &LabeledGraph, bipartition: &Bipartition) -> Result<Matching> {
    bipartition.check_for(graph)?;
    if graph.edge_count() <= 1 {
        return match_pi_reference(graph, bipartition, &Limits::default().with_oracle(usize::MAX));
    }
    let weights = match_pi_weights(graph, bipartition)?;
    let weighted: Vec<(Edge, BigUint)> = weights.iter().map(|(e, w)| (e, w.clone())).collect();
    debug_assert!(weighted.iter().all(|(_, w)| !w.is_zero() && !w.is_one()));
    Ok(solve_positive_canonical(&weighted))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::figures::figure;
    use crate::graph::utilities;

    fn m(pairs: &[(u32, u32)]) -> Matching {
        Matching::from_pairs(pairs).unwrap()
    }

    fn b(text: &str, n: u32) -> Bipartition {
        Bipartition::parse(text, n).unwrap()
    }

    #[test]
    fn feasibility_on_fig1a() {
        let g = figure("fig1a").unwrap();
        assert!(is_feasible(&g, &m(&[(2, 3), (4, 5), (6, 7)]), &b("1", 2)));
        assert!(!is_feasible(&g, &m(&[(1, 2), (3, 4), (5, 6)]), &b("1", 2)));
        assert!(!is_feasible(&g, &m(&[(2, 3), (4, 5), (6, 7)]), &b("1,2", 2)));
        let empty = LabeledGraph::from_owners(1, &[], []).unwrap();
        assert!(is_feasible(&empty, &Matching::empty(), &b("1", 1)));
    }

    #[test]
    fn fig1_outputs() {
        let g = figure("fig1a").unwrap();
        let limits = Limits::default();
        let want = m(&[(2, 3), (4, 5), (6, 7)]);
        assert_eq!(match_pi_reference(&g, &b("1", 2), &limits).unwrap(), want);
        assert_eq!(match_pi(&g, &b("1", 2)).unwrap(), want);
        assert_eq!(utilities(&g, &want).unwrap().0, vec![3, 3]);
        let g1 = figure("fig1b").unwrap();
        assert_eq!(match_pi(&g1, &b("1", 2)).unwrap(), m(&[(2, 3)]));
        assert_eq!(match_pi_reference(&g1, &b("1", 2), &limits).unwrap(), m(&[(2, 3)]));
        let g2 = figure("fig1c").unwrap();
        assert_eq!(match_pi(&g2, &b("1", 2)).unwrap(), m(&[(4, 5), (6, 7)]));
    }

    #[test]
    fn single_cross_edge_on_one_side_is_dropped() {
        let g = LabeledGraph::from_owners(2, &[1, 2], [(1, 2)]).unwrap();
        assert_eq!(match_pi(&g, &b("1,2", 2)).unwrap(), Matching::empty());
        assert_eq!(match_pi(&g, &b("1", 2)).unwrap(), m(&[(1, 2)]));
    }

    #[test]
    fn fig5_weights() {
        let g = figure("fig5").unwrap();
        let w = match_pi_weights(&g, &b("1", 2)).unwrap();
        assert_eq!(w.weight_of(Edge::new(2, 3)), BigUint::from(4374u32));
        assert_eq!(w.weight_of(Edge::new(1, 2)), BigUint::from(729u32 + 81 + 1));
        assert_eq!(w.weight_of(Edge::new(3, 4)), BigUint::from(729u32 + 81 + 1));
        assert!(internal_weight_dominates(&g, &b("1", 2)).unwrap());
        for bip in Bipartition::all(2) {
            assert_eq!(match_pi(&g, &bip).unwrap(), m(&[(2, 3)]), "{bip}");
        }
    }

    #[test]
    fn same_side_edges_get_no_weight() {
        let g = figure("fig5").unwrap();
        let w = match_pi_weights(&g, &b("", 2)).unwrap();
        assert_eq!(w.len(), 1);
        assert!(w.get(Edge::new(2, 3)).is_some());
    }

    #[test]
    fn naive_serial_on_fig3() {
        let limits = Limits::default();
        let g = figure("fig3").unwrap();
        assert_eq!(naive_serial(&g, &limits).unwrap(), m(&[(2, 3), (4, 5), (6, 7), (8, 9)]));
        let g1 = figure("fig3b").unwrap();
        assert_eq!(naive_serial(&g1, &limits).unwrap(), m(&[(1, 2), (3, 4), (7, 8), (9, 10)]));
    }
}
