//! The small named instances every audit fixture refers to.
//!
//! | name    | agents | graph                                                         |
//! |---------|--------|---------------------------------------------------------------|
//! | `fig1a` | 2      | 7-vertex path, owners (1,2,2,1,1,1,2)                         |
//! | `fig1b` | 2      | `fig1a` after agent 1 hides v5, v6                            |
//! | `fig1c` | 2      | `fig1a` after agent 2 hides v2, v3                            |
//! | `fig3`  | 3      | 10-vertex path, owners (2,3,1,2,2,2,2,1,3,2)                  |
//! | `fig3b` | 3      | `fig3` after agent 2 hides v5, v6                             |
//! | `fig5`  | 2      | 4-vertex path, owners (1,2,2,1)                               |
//! | `fig6`  | 3      | 7-vertex path, owners (1,1,1,3,2,2,2)                         |
//! | `case1` | 3      | 14-vertex alternating path, owners (2,2,2,1,1,1,1,3,3,3,1,1,1,2) |
//! | `case2` | 3      | 7-vertex alternating path, owners (3,3,3,1,2,2,2)             |

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::{AgentId, LabeledGraph, Matching, VertexId};

pub const FIGURE_NAMES: &[&str] = &[
    "fig1a", "fig1b", "fig1c", "fig3", "fig3b", "fig5", "fig6", "case1", "case2",
];

fn path(num_agents: u32, owners: &[AgentId]) -> LabeledGraph {
    let m = owners.len() as VertexId;
    LabeledGraph::from_owners(num_agents, owners, (1..m).map(|v| (v, v + 1)))
        .expect("figure graphs are valid")
}

fn hide(g: LabeledGraph, hidden: &[VertexId]) -> LabeledGraph {
    let hidden: BTreeSet<VertexId> = hidden.iter().copied().collect();
    g.without(&hidden).expect("hidden vertices exist")
}

pub fn figure(name: &str) -> Result<LabeledGraph> {
    let g = match name {
        "fig1a" => path(2, &[1, 2, 2, 1, 1, 1, 2]),
        "fig1b" => hide(path(2, &[1, 2, 2, 1, 1, 1, 2]), &[5, 6]),
        "fig1c" => hide(path(2, &[1, 2, 2, 1, 1, 1, 2]), &[2, 3]),
        "fig3" => path(3, &[2, 3, 1, 2, 2, 2, 2, 1, 3, 2]),
        "fig3b" => hide(path(3, &[2, 3, 1, 2, 2, 2, 2, 1, 3, 2]), &[5, 6]),
        "fig5" => path(2, &[1, 2, 2, 1]),
        "fig6" => path(3, &[1, 1, 1, 3, 2, 2, 2]),
        "case1" => path(3, &[2, 2, 2, 1, 1, 1, 1, 3, 3, 3, 1, 1, 1, 2]),
        "case2" => path(3, &[3, 3, 3, 1, 2, 2, 2]),
        _ => return Err(Error::UnknownFigure(name.to_string())),
    };
    Ok(g)
}

/// The two matchings drawn on the `case1` alternating path: `M` has three
/// internal edges of agent 1 and `M'` two.
pub fn case1_matchings() -> (Matching, Matching) {
    (
        Matching::from_pairs(&[(2, 3), (4, 5), (6, 7), (8, 9), (10, 11), (12, 13)]).unwrap(),
        Matching::from_pairs(&[(1, 2), (3, 4), (5, 6), (7, 8), (9, 10), (11, 12), (13, 14)]).unwrap(),
    )
}

/// `M`, `M'` and the swapped `M''` drawn on the `case2` path.
pub fn case2_matchings() -> (Matching, Matching, Matching) {
    (
        Matching::from_pairs(&[(2, 3), (4, 5), (6, 7)]).unwrap(),
        Matching::from_pairs(&[(1, 2), (3, 4), (5, 6)]).unwrap(),
        Matching::from_pairs(&[(1, 2), (4, 5), (6, 7)]).unwrap(),
    )
}

/// The two maximum matchings of `fig6` with equal internal totals but
/// different utility vectors.
pub fn fig6_matchings() -> (Matching, Matching) {
    (
        Matching::from_pairs(&[(1, 2), (3, 4), (5, 6)]).unwrap(),
        Matching::from_pairs(&[(2, 3), (4, 5), (6, 7)]).unwrap(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_named_figure_is_valid() {
        for name in FIGURE_NAMES {
            assert!(figure(name).unwrap().is_valid(), "{name}");
        }
        assert!(matches!(figure("fig9"), Err(Error::UnknownFigure(_))));
    }

    #[test]
    fn owners_match_the_drawings() {
        let owners = |g: &LabeledGraph| g.labeled_vertices().iter().map(|&(_, a)| a).collect::<Vec<_>>();
        assert_eq!(owners(&figure("fig5").unwrap()), vec![1, 2, 2, 1]);
        assert_eq!(owners(&figure("fig3").unwrap()), vec![2, 3, 1, 2, 2, 2, 2, 1, 3, 2]);
        assert_eq!(figure("fig3b").unwrap().vertices().collect::<Vec<_>>(), vec![1, 2, 3, 4, 7, 8, 9, 10]);
    }
}
