//! Exhaustive matching enumeration. Only used on instances under the
//! configured oracle bound.

use num_bigint::BigUint;

use crate::error::Result;
use crate::graph::{Edge, LabeledGraph, Matching, VertexId};
use crate::solvers::WeightAssignment;
use crate::Limits;

/// Calls `f` once for every matching of `graph` (the empty one included).
/// Edge slices handed to `f` are not sorted.
pub fn for_each_matching(graph: &LabeledGraph, limits: &Limits, mut f: impl FnMut(&[Edge])) -> Result<()> {
    limits.check_oracle(graph)?;
    let vertices: Vec<VertexId> = graph.vertices().collect();
    let pos = |v: VertexId| vertices.binary_search(&v).unwrap();
    // Forward neighbours only, so every edge is tried from its smaller end.
    let mut forward: Vec<Vec<usize>> = vec![Vec::new(); vertices.len()];
    for e in graph.edges() {
        forward[pos(e.lo())].push(pos(e.hi()));
    }
    let mut used = vec![false; vertices.len()];
    let mut stack = Vec::new();
    recurse(0, &vertices, &forward, &mut used, &mut stack, &mut f);
    Ok(())
}

fn recurse(
    i: usize,
    vertices: &[VertexId],
    forward: &[Vec<usize>],
    used: &mut [bool],
    stack: &mut Vec<Edge>,
    f: &mut impl FnMut(&[Edge]),
) {
    let mut i = i;
    while i < vertices.len() && used[i] {
        i += 1;
    }
    if i == vertices.len() {
        f(stack);
        return;
    }
    used[i] = true;
    recurse(i + 1, vertices, forward, used, stack, f);
    for &j in &forward[i] {
        if !used[j] {
            used[j] = true;
            stack.push(Edge::new(vertices[i], vertices[j]));
            recurse(i + 1, vertices, forward, used, stack, f);
            stack.pop();
            used[j] = false;
        }
    }
    used[i] = false;
}

/// Every matching of `graph`, sorted canonically.
pub fn all_matchings(graph: &LabeledGraph, limits: &Limits) -> Result<Vec<Matching>> {
    let mut out = Vec::new();
    for_each_matching(graph, limits, |edges| {
        out.push(Matching::from_edges_unchecked(edges.to_vec()))
    })?;
    out.sort();
    Ok(out)
}

/// Every maximum-cardinality matching of `graph`, sorted canonically.
pub fn enumerate_maximum_matchings(graph: &LabeledGraph, limits: &Limits) -> Result<Vec<Matching>> {
    let mut best = 0;
    let mut out = Vec::new();
    for_each_matching(graph, limits, |edges| {
        if edges.len() > best {
            best = edges.len();
            out.clear();
        }
        if edges.len() == best {
            out.push(Matching::from_edges_unchecked(edges.to_vec()));
        }
    })?;
    out.sort();
    Ok(out)
}

/// Maximum weight by exhaustive search, with the canonical tie-break.
pub fn brute_force_max_weight(
    graph: &LabeledGraph,
    weights: &WeightAssignment,
    limits: &Limits,
) -> Result<(Matching, BigUint)> {
    weights.check_on(graph)?;
    let mut best: Option<(Matching, BigUint)> = None;
    for_each_matching(graph, limits, |edges| {
        let m = Matching::from_edges_unchecked(edges.to_vec());
        let w = weights.total(&m);
        let better = match &best {
            None => true,
            Some((bm, bw)) => w > *bw || (w == *bw && m < *bm),
        };
        if better {
            best = Some((m, w));
        }
    })?;
    Ok(best.expect("the empty matching always exists"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::figures;

    #[test]
    fn single_edge_has_one_maximum_matching() {
        let g = LabeledGraph::from_owners(1, &[1, 1], [(1, 2)]).unwrap();
        let all = enumerate_maximum_matchings(&g, &Limits::default()).unwrap();
        assert_eq!(all, vec![Matching::from_pairs(&[(1, 2)]).unwrap()]);
        assert_eq!(all_matchings(&g, &Limits::default()).unwrap().len(), 2);
    }

    #[test]
    fn seven_vertex_paths_have_four_maximum_matchings() {
        for name in ["fig6", "fig1a"] {
            let g = figures::figure(name).unwrap();
            let all = enumerate_maximum_matchings(&g, &Limits::default()).unwrap();
            let expected: Vec<Matching> = [
                [(1, 2), (3, 4), (5, 6)],
                [(1, 2), (3, 4), (6, 7)],
                [(1, 2), (4, 5), (6, 7)],
                [(2, 3), (4, 5), (6, 7)],
            ]
            .iter()
            .map(|p| Matching::from_pairs(p).unwrap())
            .collect();
            assert_eq!(all, expected, "{name}");
        }
    }

    #[test]
    fn oracle_bound_is_enforced() {
        let owners = vec![1; 17];
        let g = LabeledGraph::from_owners(1, &owners, []).unwrap();
        assert!(matches!(
            all_matchings(&g, &Limits::default()),
            Err(crate::Error::OracleBound { vertices: 17, bound: 16 })
        ));
    }

    #[test]
    fn matching_counts_of_complete_graphs() {
        // Telephone numbers: 1, 1, 2, 4, 10, 26, 76.
        for (n, count) in [(1usize, 1usize), (2, 2), (3, 4), (4, 10), (5, 26), (6, 76)] {
            let mut edges = Vec::new();
            for i in 1..=n as u32 {
                for j in i + 1..=n as u32 {
                    edges.push((i, j));
                }
            }
            let g = LabeledGraph::from_owners(1, &vec![1; n], edges).unwrap();
            assert_eq!(all_matchings(&g, &Limits::default()).unwrap().len(), count);
        }
    }
}
