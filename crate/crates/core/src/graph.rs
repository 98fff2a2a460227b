//! Agent-labeled graphs, matchings, and the per-agent accounting built on them.
//!
//! Vertex ids are 1-based and stable: taking an induced subgraph keeps the
//! surviving ids untouched, so a hidden vertex set can be described in the
//! ids of the original instance.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type VertexId = u32;
pub type AgentId = u32;

/// An undirected edge, stored with its smaller endpoint first.
///
/// The derived ordering (by smaller endpoint, then larger) is the ordering
/// used for every canonical tie-break in this crate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "(VertexId, VertexId)", from = "(VertexId, VertexId)")]
pub struct Edge {
    lo: VertexId,
    hi: VertexId,
}

impl Edge {
    pub fn new(a: VertexId, b: VertexId) -> Self {
        if a <= b {
            Edge { lo: a, hi: b }
        } else {
            Edge { lo: b, hi: a }
        }
    }

    pub fn lo(self) -> VertexId {
        self.lo
    }

    pub fn hi(self) -> VertexId {
        self.hi
    }

    pub fn endpoints(self) -> (VertexId, VertexId) {
        (self.lo, self.hi)
    }

    pub fn is_loop(self) -> bool {
        self.lo == self.hi
    }

    pub fn touches(self, v: VertexId) -> bool {
        self.lo == v || self.hi == v
    }

    /// The endpoint that is not `v`. Callers guarantee `v` is an endpoint.
    pub fn other(self, v: VertexId) -> VertexId {
        if self.lo == v {
            self.hi
        } else {
            self.lo
        }
    }
}

impl From<(VertexId, VertexId)> for Edge {
    fn from((a, b): (VertexId, VertexId)) -> Self {
        Edge::new(a, b)
    }
}

impl From<Edge> for (VertexId, VertexId) {
    fn from(e: Edge) -> Self {
        (e.lo, e.hi)
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(v{},v{})", self.lo, self.hi)
    }
}

/// A structural problem found by [`LabeledGraph::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NoAgents,
    ZeroVertexId,
    DuplicateVertex(VertexId),
    OwnerOutOfRange { vertex: VertexId, owner: AgentId },
    SelfLoop(VertexId),
    DuplicateEdge(Edge),
    UnknownEndpoint { edge: Edge, vertex: VertexId },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoAgents => write!(f, "no agents"),
            Violation::ZeroVertexId => write!(f, "vertex id 0 (ids are 1-based)"),
            Violation::DuplicateVertex(v) => write!(f, "duplicate vertex v{v}"),
            Violation::OwnerOutOfRange { vertex, owner } => {
                write!(f, "owner {owner} of v{vertex} out of range")
            }
            Violation::SelfLoop(v) => write!(f, "self-loop at v{v}"),
            Violation::DuplicateEdge(e) => write!(f, "duplicate edge {e}"),
            Violation::UnknownEndpoint { edge, vertex } => {
                write!(f, "edge {edge} has undeclared endpoint v{vertex}")
            }
        }
    }
}

/// An undirected graph whose vertices are each owned by one of `num_agents`
/// agents. Agents may own no vertices at all.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledGraph {
    num_agents: u32,
    /// Declared vertices, sorted by id.
    vertices: Vec<(VertexId, AgentId)>,
    /// Declared edges, sorted.
    edges: Vec<Edge>,
    /// `owner_of[v]` is the owner of vertex `v`, or 0 when `v` is absent.
    owner_of: Vec<AgentId>,
}

impl LabeledGraph {
    /// Builds a graph without checking any invariant. Use [`validate`] to list
    /// what is wrong with it; every other operation assumes a valid graph.
    ///
    /// [`validate`]: LabeledGraph::validate
    pub fn from_parts(
        num_agents: u32,
        vertices: impl IntoIterator<Item = (VertexId, AgentId)>,
        edges: impl IntoIterator<Item = (VertexId, VertexId)>,
    ) -> Self {
        let mut vertices: Vec<_> = vertices.into_iter().collect();
        vertices.sort_by_key(|&(v, _)| v);
        let mut edges: Vec<Edge> = edges.into_iter().map(Edge::from).collect();
        edges.sort_unstable();
        let max_id = vertices.last().map_or(0, |&(v, _)| v) as usize;
        let mut owner_of = vec![0; max_id + 1];
        for &(v, a) in &vertices {
            owner_of[v as usize] = a;
        }
        LabeledGraph {
            num_agents,
            vertices,
            edges,
            owner_of,
        }
    }

    /// Builds and validates a graph.
    pub fn new(
        num_agents: u32,
        vertices: impl IntoIterator<Item = (VertexId, AgentId)>,
        edges: impl IntoIterator<Item = (VertexId, VertexId)>,
    ) -> Result<Self> {
        let g = Self::from_parts(num_agents, vertices, edges);
        let violations = g.validate();
        if violations.is_empty() {
            Ok(g)
        } else {
            Err(Error::InvalidGraph(violations))
        }
    }

    /// Vertices `1..=owners.len()`, vertex `k` owned by `owners[k-1]`.
    pub fn from_owners(
        num_agents: u32,
        owners: &[AgentId],
        edges: impl IntoIterator<Item = (VertexId, VertexId)>,
    ) -> Result<Self> {
        Self::new(
            num_agents,
            owners.iter().enumerate().map(|(i, &a)| (i as VertexId + 1, a)),
            edges,
        )
    }

    /// Every invariant violation, in a stable order. Empty means valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.num_agents == 0 {
            out.push(Violation::NoAgents);
        }
        let mut seen = BTreeSet::new();
        for &(v, a) in &self.vertices {
            if v == 0 {
                out.push(Violation::ZeroVertexId);
            } else if !seen.insert(v) {
                out.push(Violation::DuplicateVertex(v));
            }
            if a == 0 || a > self.num_agents {
                out.push(Violation::OwnerOutOfRange {
                    vertex: v,
                    owner: a,
                });
            }
        }
        for (i, &e) in self.edges.iter().enumerate() {
            if e.is_loop() {
                out.push(Violation::SelfLoop(e.lo));
            }
            if i > 0 && self.edges[i - 1] == e {
                out.push(Violation::DuplicateEdge(e));
            }
            for v in [e.lo, e.hi] {
                if v == 0 || !seen.contains(&v) {
                    out.push(Violation::UnknownEndpoint { edge: e, vertex: v });
                }
                if e.is_loop() {
                    break;
                }
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    pub fn num_agents(&self) -> u32 {
        self.num_agents
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Vertex ids in ascending order.
    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices.iter().map(|&(v, _)| v)
    }

    /// `(vertex, owner)` pairs in ascending vertex order.
    pub fn labeled_vertices(&self) -> &[(VertexId, AgentId)] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Largest vertex id in use, or 0 for an empty graph.
    pub fn max_vertex_id(&self) -> VertexId {
        self.vertices.last().map_or(0, |&(v, _)| v)
    }

    pub fn owner(&self, v: VertexId) -> Option<AgentId> {
        match self.owner_of.get(v as usize) {
            Some(&a) if a != 0 => Some(a),
            _ => None,
        }
    }

    /// Owner of a vertex known to be present.
    pub(crate) fn owner_unchecked(&self, v: VertexId) -> AgentId {
        self.owner_of[v as usize]
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.owner(v).is_some()
    }

    pub fn has_edge(&self, e: Edge) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    pub fn check_agent(&self, agent: AgentId) -> Result<()> {
        if agent == 0 || agent > self.num_agents {
            Err(Error::UnknownAgent {
                agent,
                num_agents: self.num_agents,
            })
        } else {
            Ok(())
        }
    }

    /// The vertices owned by `agent`, ascending.
    pub fn agent_vertices(&self, agent: AgentId) -> Vec<VertexId> {
        self.vertices
            .iter()
            .filter(|&&(_, a)| a == agent)
            .map(|&(v, _)| v)
            .collect()
    }

    /// Owners of both endpoints.
    pub fn edge_owners(&self, e: Edge) -> (AgentId, AgentId) {
        (self.owner_unchecked(e.lo), self.owner_unchecked(e.hi))
    }

    pub fn is_internal(&self, e: Edge) -> bool {
        let (a, b) = self.edge_owners(e);
        a == b
    }

    /// The subgraph induced by `keep`, with vertex ids and owners preserved.
    pub fn induced_subgraph(&self, keep: &BTreeSet<VertexId>) -> Result<Self> {
        if let Some(&v) = keep.iter().find(|&&v| !self.contains_vertex(v)) {
            return Err(Error::UnknownVertex(v));
        }
        Ok(self.restricted(|v| keep.contains(&v)))
    }

    /// The subgraph induced by all vertices except `remove`.
    pub fn without(&self, remove: &BTreeSet<VertexId>) -> Result<Self> {
        if let Some(&v) = remove.iter().find(|&&v| !self.contains_vertex(v)) {
            return Err(Error::UnknownVertex(v));
        }
        Ok(self.restricted(|v| !remove.contains(&v)))
    }

    /// The subgraph induced by the vertices of one agent.
    pub fn agent_subgraph(&self, agent: AgentId) -> Self {
        self.restricted(|v| self.owner_unchecked(v) == agent)
    }

    pub(crate) fn restricted(&self, keep: impl Fn(VertexId) -> bool) -> Self {
        let vertices: Vec<_> = self
            .vertices
            .iter()
            .copied()
            .filter(|&(v, _)| keep(v))
            .collect();
        let edges: Vec<_> = self
            .edges
            .iter()
            .copied()
            .filter(|e| keep(e.lo) && keep(e.hi))
            .collect();
        let max_id = vertices.last().map_or(0, |&(v, _)| v) as usize;
        let mut owner_of = self.owner_of.clone();
        owner_of.truncate(max_id + 1);
        for (v, slot) in owner_of.iter_mut().enumerate() {
            if *slot != 0 && !keep(v as VertexId) {
                *slot = 0;
            }
        }
        LabeledGraph {
            num_agents: self.num_agents,
            vertices,
            edges,
            owner_of,
        }
    }

    /// Same vertices, owners and agents, with the edge set filtered.
    pub(crate) fn with_edges_where(&self, keep: impl Fn(Edge) -> bool) -> Self {
        LabeledGraph {
            num_agents: self.num_agents,
            vertices: self.vertices.clone(),
            edges: self.edges.iter().copied().filter(|&e| keep(e)).collect(),
            owner_of: self.owner_of.clone(),
        }
    }
}

/// A set of vertex-disjoint edges, kept sorted.
///
/// `Ord` compares the sorted edge lists lexicographically; "smallest" is the
/// canonical choice among tied optima throughout the crate.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Edge>", into = "Vec<Edge>")]
pub struct Matching {
    edges: Vec<Edge>,
}

impl Matching {
    pub fn new(edges: impl IntoIterator<Item = Edge>) -> Result<Self> {
        let mut edges: Vec<Edge> = edges.into_iter().collect();
        edges.sort_unstable();
        let mut used = BTreeSet::new();
        for &e in &edges {
            if e.is_loop() {
                return Err(Error::InvalidMatching(format!("self-loop {e}")));
            }
            for v in [e.lo, e.hi] {
                if !used.insert(v) {
                    return Err(Error::InvalidMatching(format!(
                        "vertex v{v} is covered twice"
                    )));
                }
            }
        }
        Ok(Matching { edges })
    }

    /// Convenience for literals: `Matching::from_pairs(&[(2, 3), (4, 5)])`.
    pub fn from_pairs(pairs: &[(VertexId, VertexId)]) -> Result<Self> {
        Self::new(pairs.iter().map(|&p| Edge::from(p)))
    }

    /// Callers guarantee the edges are vertex-disjoint.
    pub(crate) fn from_edges_unchecked(mut edges: Vec<Edge>) -> Self {
        edges.sort_unstable();
        Matching { edges }
    }

    pub fn empty() -> Self {
        Matching::default()
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn contains(&self, e: Edge) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    pub fn covers(&self, v: VertexId) -> bool {
        self.edges.iter().any(|e| e.touches(v))
    }

    pub fn matched_vertices(&self) -> BTreeSet<VertexId> {
        self.edges.iter().flat_map(|e| [e.lo, e.hi]).collect()
    }

    /// Every edge of the matching is an edge of `graph`.
    pub fn check_on(&self, graph: &LabeledGraph) -> Result<()> {
        match self.edges.iter().find(|&&e| !graph.has_edge(e)) {
            Some(&e) => Err(Error::EdgeNotInGraph(e)),
            None => Ok(()),
        }
    }

    /// Union of two matchings known to be vertex-disjoint.
    pub fn union(&self, other: &Matching) -> Result<Matching> {
        Matching::new(self.edges.iter().chain(other.edges.iter()).copied())
    }
}

impl TryFrom<Vec<Edge>> for Matching {
    type Error = Error;

    fn try_from(edges: Vec<Edge>) -> Result<Self> {
        Matching::new(edges)
    }
}

impl From<Matching> for Vec<Edge> {
    fn from(m: Matching) -> Self {
        m.edges
    }
}

impl fmt::Display for Matching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, e) in self.edges.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

/// Matched-vertex counts per agent; index 0 is agent 1.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct UtilityVector(pub Vec<u32>);

impl UtilityVector {
    pub fn get(&self, agent: AgentId) -> u32 {
        self.0[agent as usize - 1]
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }
}

impl fmt::Display for UtilityVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, u) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{u}")?;
        }
        f.write_str(")")
    }
}

/// Number of vertices of `agent` matched by `matching`.
pub fn utility(graph: &LabeledGraph, matching: &Matching, agent: AgentId) -> Result<u32> {
    graph.check_agent(agent)?;
    matching.check_on(graph)?;
    Ok(utility_unchecked(graph, matching, agent))
}

pub fn utilities(graph: &LabeledGraph, matching: &Matching) -> Result<UtilityVector> {
    matching.check_on(graph)?;
    Ok(utilities_unchecked(graph, matching))
}

pub(crate) fn utility_unchecked(graph: &LabeledGraph, matching: &Matching, agent: AgentId) -> u32 {
    matching
        .edges()
        .iter()
        .map(|&e| {
            let (a, b) = graph.edge_owners(e);
            u32::from(a == agent) + u32::from(b == agent)
        })
        .sum()
}

pub(crate) fn utilities_unchecked(graph: &LabeledGraph, matching: &Matching) -> UtilityVector {
    let mut u = vec![0; graph.num_agents() as usize];
    for &e in matching.edges() {
        let (a, b) = graph.edge_owners(e);
        u[a as usize - 1] += 1;
        u[b as usize - 1] += 1;
    }
    UtilityVector(u)
}

/// Symmetric table of `|M_ij|`: matching edges with one endpoint owned by
/// agent `i` and the other by agent `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionCounts {
    n: usize,
    counts: Vec<u32>,
}

impl PartitionCounts {
    pub fn num_agents(&self) -> u32 {
        self.n as u32
    }

    /// `|M_ij|`; symmetric in `i` and `j`.
    pub fn get(&self, i: AgentId, j: AgentId) -> u32 {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        self.counts[(i as usize - 1) * self.n + (j as usize - 1)]
    }

    /// `Σ_i |M_ii|`.
    pub fn internal_total(&self) -> u32 {
        (1..=self.n as u32).map(|i| self.get(i, i)).sum()
    }

    /// `Σ_{i<j} |M_ij|`.
    pub fn external_total(&self) -> u32 {
        self.total() - self.internal_total()
    }

    /// `Σ_{i≤j} |M_ij|`, which equals `|M|`.
    pub fn total(&self) -> u32 {
        self.counts.iter().sum()
    }

    /// Nonzero entries `(i, j, |M_ij|)` with `i ≤ j`.
    pub fn nonzero(&self) -> Vec<(AgentId, AgentId, u32)> {
        let mut out = Vec::new();
        for i in 1..=self.n as u32 {
            for j in i..=self.n as u32 {
                let c = self.get(i, j);
                if c > 0 {
                    out.push((i, j, c));
                }
            }
        }
        out
    }
}

pub fn partition_counts(graph: &LabeledGraph, matching: &Matching) -> Result<PartitionCounts> {
    matching.check_on(graph)?;
    Ok(partition_counts_unchecked(graph, matching))
}

pub(crate) fn partition_counts_unchecked(
    graph: &LabeledGraph,
    matching: &Matching,
) -> PartitionCounts {
    let n = graph.num_agents() as usize;
    let mut counts = vec![0; n * n];
    for &e in matching.edges() {
        let (a, b) = graph.edge_owners(e);
        let (i, j) = if a <= b { (a, b) } else { (b, a) };
        counts[(i as usize - 1) * n + (j as usize - 1)] += 1;
    }
    PartitionCounts { n, counts }
}

/// Which of the two compared matchings an edge of a symmetric difference
/// belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    First,
    Second,
}

/// One connected component of a symmetric difference: an alternating path,
/// or an alternating cycle when `closed` (then the first vertex is not
/// repeated at the end of `vertices`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlternatingComponent {
    pub closed: bool,
    pub vertices: Vec<VertexId>,
    pub edges: Vec<(Edge, Side)>,
}

impl AlternatingComponent {
    pub fn edges_from(&self, side: Side) -> impl Iterator<Item = Edge> + '_ {
        self.edges
            .iter()
            .filter(move |&&(_, s)| s == side)
            .map(|&(e, _)| e)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AlternatingDecomposition {
    pub components: Vec<AlternatingComponent>,
}

impl AlternatingDecomposition {
    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.components.iter().map(|c| c.edges.len()).sum()
    }
}

/// Decomposes `first Δ second` into vertex-disjoint alternating paths and
/// even cycles. Paths are walked from their smaller endpoint; cycles start at
/// their smallest vertex along its `first` edge. Components are ordered by
/// their starting vertex.
pub fn symmetric_difference(
    graph: &LabeledGraph,
    first: &Matching,
    second: &Matching,
) -> Result<AlternatingDecomposition> {
    first.check_on(graph)?;
    second.check_on(graph)?;
    Ok(symmetric_difference_unchecked(first, second))
}

pub(crate) fn symmetric_difference_unchecked(
    first: &Matching,
    second: &Matching,
) -> AlternatingDecomposition {
    // Each vertex has at most one incident edge per side.
    let mut incident: BTreeMap<VertexId, [Option<Edge>; 2]> = BTreeMap::new();
    for (side, m, other) in [(0, first, second), (1, second, first)] {
        for &e in m.edges() {
            if !other.contains(e) {
                for v in [e.lo, e.hi] {
                    incident.entry(v).or_default()[side] = Some(e);
                }
            }
        }
    }
    let side_of = |i: usize| if i == 0 { Side::First } else { Side::Second };

    let mut visited: BTreeSet<VertexId> = BTreeSet::new();
    let mut components = Vec::new();
    let walk = |start: VertexId, mut slot: usize, visited: &mut BTreeSet<VertexId>| {
        let mut vertices = vec![start];
        let mut edges = Vec::new();
        visited.insert(start);
        let mut v = start;
        let mut closed = false;
        while let Some(e) = incident[&v][slot] {
            edges.push((e, side_of(slot)));
            let w = e.other(v);
            if w == start {
                closed = true;
                break;
            }
            vertices.push(w);
            visited.insert(w);
            v = w;
            slot = 1 - slot;
        }
        AlternatingComponent {
            closed,
            vertices,
            edges,
        }
    };

    // Paths first from endpoints (degree one), then what remains is cycles.
    let endpoints: Vec<VertexId> = incident
        .iter()
        .filter(|(_, s)| s[0].is_none() || s[1].is_none())
        .map(|(&v, _)| v)
        .collect();
    for v in endpoints {
        if visited.contains(&v) {
            continue;
        }
        let slot = if incident[&v][0].is_some() { 0 } else { 1 };
        components.push(walk(v, slot, &mut visited));
    }
    let rest: Vec<VertexId> = incident.keys().copied().collect();
    for v in rest {
        if !visited.contains(&v) {
            components.push(walk(v, 0, &mut visited));
        }
    }
    components.sort_by_key(|c| c.vertices[0]);
    AlternatingDecomposition { components }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig1a() -> LabeledGraph {
        LabeledGraph::from_owners(
            2,
            &[1, 2, 2, 1, 1, 1, 2],
            [(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7)],
        )
        .unwrap()
    }

    fn fig6() -> LabeledGraph {
        LabeledGraph::from_owners(
            3,
            &[1, 1, 1, 3, 2, 2, 2],
            [(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7)],
        )
        .unwrap()
    }

    fn keep(ids: &[VertexId]) -> BTreeSet<VertexId> {
        ids.iter().copied().collect()
    }

    #[test]
    fn empty_graph_is_valid() {
        let g = LabeledGraph::from_parts(1, [], []);
        assert!(g.validate().is_empty());
    }

    #[test]
    fn violations_are_reported_as_data() {
        let g = LabeledGraph::from_parts(2, [(1, 1), (2, 3), (2, 1)], [(1, 1), (1, 2), (2, 1), (1, 9)]);
        let v = g.validate();
        assert!(v.contains(&Violation::SelfLoop(1)));
        assert!(v.contains(&Violation::DuplicateVertex(2)));
        assert!(v.contains(&Violation::OwnerOutOfRange { vertex: 2, owner: 3 }));
        assert!(v.contains(&Violation::DuplicateEdge(Edge::new(1, 2))));
        assert!(v.contains(&Violation::UnknownEndpoint {
            edge: Edge::new(1, 9),
            vertex: 9
        }));
        assert_eq!(Violation::SelfLoop(1).to_string(), "self-loop at v1");
        assert!(matches!(
            LabeledGraph::new(0, [], []),
            Err(Error::InvalidGraph(_))
        ));
    }

    #[test]
    fn agents_without_vertices_are_legal() {
        let g = LabeledGraph::from_owners(5, &[1, 1], [(1, 2)]).unwrap();
        assert!(g.agent_vertices(4).is_empty());
        assert_eq!(utilities(&g, &Matching::from_pairs(&[(1, 2)]).unwrap()).unwrap().0, vec![2, 0, 0, 0, 0]);
    }

    #[test]
    fn induced_subgraphs_of_the_lower_bound_instance() {
        let g = fig1a();
        let all: BTreeSet<_> = g.vertices().collect();
        assert_eq!(g.induced_subgraph(&all).unwrap(), g);

        let g1 = g.without(&keep(&[5, 6])).unwrap();
        assert_eq!(g1.edges(), &[Edge::new(1, 2), Edge::new(2, 3), Edge::new(3, 4)]);
        assert_eq!(g1.vertices().collect::<Vec<_>>(), vec![1, 2, 3, 4, 7]);
        assert_eq!(g1.owner(7), Some(2));
        assert_eq!(g1.owner(5), None);

        let g2 = g.without(&keep(&[2, 3])).unwrap();
        assert_eq!(g2.edges(), &[Edge::new(4, 5), Edge::new(5, 6), Edge::new(6, 7)]);

        assert_eq!(g.induced_subgraph(&keep(&[1, 42])), Err(Error::UnknownVertex(42)));
    }

    #[test]
    fn utilities_on_figures() {
        let g = fig1a();
        let m = Matching::from_pairs(&[(2, 3), (4, 5), (6, 7)]).unwrap();
        assert_eq!(utility(&g, &m, 1).unwrap(), 3);
        assert_eq!(utility(&g, &m, 2).unwrap(), 3);
        assert_eq!(utilities(&g, &Matching::empty()).unwrap().0, vec![0, 0]);

        let fig3 = LabeledGraph::from_owners(
            3,
            &[2, 3, 1, 2, 2, 2, 2, 1, 3, 2],
            [(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (8, 9), (9, 10)],
        )
        .unwrap();
        let m = Matching::from_pairs(&[(2, 3), (4, 5), (6, 7), (8, 9)]).unwrap();
        assert_eq!(utility(&fig3, &m, 2).unwrap(), 4);

        let bad = Matching::from_pairs(&[(1, 3)]).unwrap();
        assert_eq!(utility(&g, &bad, 1), Err(Error::EdgeNotInGraph(Edge::new(1, 3))));
    }

    #[test]
    fn partition_counts_classify_edges_by_owner() {
        let g = fig6();
        let m = Matching::from_pairs(&[(1, 2), (3, 4), (5, 6)]).unwrap();
        let c = partition_counts(&g, &m).unwrap();
        assert_eq!(c.nonzero(), vec![(1, 1, 1), (1, 3, 1), (2, 2, 1)]);
        assert_eq!(c.get(3, 1), 1);

        let c = partition_counts(&fig1a(), &Matching::from_pairs(&[(2, 3), (4, 5), (6, 7)]).unwrap()).unwrap();
        assert_eq!(c.nonzero(), vec![(1, 1, 1), (1, 2, 1), (2, 2, 1)]);
        assert_eq!(partition_counts(&g, &Matching::empty()).unwrap().total(), 0);
    }

    #[test]
    fn matching_rejects_shared_vertices() {
        assert!(Matching::from_pairs(&[(1, 2), (2, 3)]).is_err());
        assert!(Matching::from_pairs(&[(1, 1)]).is_err());
    }

    #[test]
    fn symmetric_difference_single_path() {
        let g = fig1a();
        let m = Matching::from_pairs(&[(2, 3), (4, 5), (6, 7)]).unwrap();
        let m2 = Matching::from_pairs(&[(2, 3), (5, 6)]).unwrap();
        let d = symmetric_difference(&g, &m, &m2).unwrap();
        assert_eq!(d.components.len(), 1);
        let c = &d.components[0];
        assert!(!c.closed);
        assert_eq!(c.vertices, vec![4, 5, 6, 7]);
        assert_eq!(
            c.edges,
            vec![
                (Edge::new(4, 5), Side::First),
                (Edge::new(5, 6), Side::Second),
                (Edge::new(6, 7), Side::First)
            ]
        );
        assert!(symmetric_difference(&g, &m, &m).unwrap().is_empty());
    }

    #[test]
    fn symmetric_difference_of_disjoint_matchings_on_a_path() {
        let g = fig6();
        let m = Matching::from_pairs(&[(1, 2), (3, 4), (5, 6)]).unwrap();
        let m2 = Matching::from_pairs(&[(2, 3), (4, 5), (6, 7)]).unwrap();
        let d = symmetric_difference(&g, &m, &m2).unwrap();
        assert_eq!(d.components.len(), 1);
        assert_eq!(d.components[0].vertices, (1..=7).collect::<Vec<_>>());
        let sides: Vec<_> = d.components[0].edges.iter().map(|&(_, s)| s).collect();
        assert_eq!(sides, [Side::First, Side::Second].repeat(3));
    }

    #[test]
    fn symmetric_difference_cycle() {
        let g = LabeledGraph::from_owners(1, &[1, 1, 1, 1], [(1, 2), (2, 3), (3, 4), (1, 4)]).unwrap();
        let a = Matching::from_pairs(&[(1, 2), (3, 4)]).unwrap();
        let b = Matching::from_pairs(&[(2, 3), (1, 4)]).unwrap();
        let d = symmetric_difference(&g, &a, &b).unwrap();
        assert_eq!(d.components.len(), 1);
        assert!(d.components[0].closed);
        assert_eq!(d.components[0].edges.len(), 4);
        assert_eq!(d.components[0].vertices, vec![1, 2, 3, 4]);
    }
}
