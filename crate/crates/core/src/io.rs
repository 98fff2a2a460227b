//! Instance files (JSON) and result tables (CSV).

use std::fmt::Write as _;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::audit::{ApproxReport, Ratio};
use crate::error::{Error, Result};
use crate::graph::{utilities_unchecked, AgentId, Edge, LabeledGraph, VertexId, Violation};
use crate::mechanisms::Outcome;
use crate::strategy::SpViolation;

pub const SCHEMA_VERSION: u32 = 1;

/// On-disk form of a [`LabeledGraph`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub schema_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub agents: u32,
    /// `[id, owner]` pairs.
    pub vertices: Vec<(VertexId, AgentId)>,
    pub edges: Vec<(VertexId, VertexId)>,
}

impl InstanceFile {
    pub fn from_graph(graph: &LabeledGraph) -> Self {
        InstanceFile {
            schema_version: SCHEMA_VERSION,
            name: None,
            note: None,
            agents: graph.num_agents(),
            vertices: graph.labeled_vertices().to_vec(),
            edges: graph.edges().iter().map(|e| e.endpoints()).collect(),
        }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn parse(bytes: &[u8]) -> Result<Self> {
        let file: InstanceFile = serde_json::from_slice(bytes)
            .map_err(|e| Error::Schema(format!("line {} column {}: {e}", e.line(), e.column())))?;
        if file.schema_version != SCHEMA_VERSION {
            return Err(Error::Schema(format!(
                "schema_version {} is not supported (expected {SCHEMA_VERSION})",
                file.schema_version
            )));
        }
        Ok(file)
    }

    pub fn to_graph(&self) -> Result<LabeledGraph> {
        let graph = LabeledGraph::from_parts(self.agents, self.vertices.iter().copied(), self.edges.iter().copied());
        let violations = graph.validate();
        if violations.is_empty() {
            return Ok(graph);
        }
        let located: Vec<String> = violations.iter().map(|v| format!("{}: {v}", self.locate(v))).collect();
        Err(Error::Schema(located.join("; ")))
    }

    /// Where in the file a violation comes from.
    fn locate(&self, violation: &Violation) -> String {
        let vertex = |id: VertexId| {
            self.vertices
                .iter()
                .rposition(|&(v, _)| v == id)
                .map_or("vertices".to_string(), |k| format!("vertices[{k}]"))
        };
        let edge = |e: Edge| {
            self.edges
                .iter()
                .rposition(|&(u, v)| Edge::new(u, v) == e)
                .map_or("edges".to_string(), |k| format!("edges[{k}]"))
        };
        match *violation {
            Violation::NoAgents => "agents".into(),
            Violation::ZeroVertexId => vertex(0),
            Violation::DuplicateVertex(v) => vertex(v),
            Violation::OwnerOutOfRange { vertex: v, .. } => vertex(v),
            Violation::SelfLoop(v) => edge(Edge::new(v, v)),
            Violation::DuplicateEdge(e) => edge(e),
            Violation::UnknownEndpoint { edge: e, .. } => edge(e),
        }
    }

    /// Stable, diff-friendly JSON: one line per list, fields in schema
    /// order.
    pub fn to_bytes(&self) -> Vec<u8> {
        let pairs = |xs: &[(u32, u32)]| {
            let items: Vec<String> = xs.iter().map(|(a, b)| format!("[{a}, {b}]")).collect();
            format!("[{}]", items.join(", "))
        };
        let quote = |s: &str| serde_json::to_string(s).expect("strings serialize");
        let mut out = String::from("{\n");
        let _ = writeln!(out, "  \"schema_version\": {},", self.schema_version);
        if let Some(name) = &self.name {
            let _ = writeln!(out, "  \"name\": {},", quote(name));
        }
        if let Some(note) = &self.note {
            let _ = writeln!(out, "  \"note\": {},", quote(note));
        }
        let _ = writeln!(out, "  \"agents\": {},", self.agents);
        let _ = writeln!(out, "  \"vertices\": {},", pairs(&self.vertices));
        let _ = writeln!(out, "  \"edges\": {}", pairs(&self.edges));
        out.push_str("}\n");
        out.into_bytes()
    }
}

pub fn read_instance(bytes: &[u8]) -> Result<LabeledGraph> {
    InstanceFile::parse(bytes)?.to_graph()
}

pub fn write_instance(graph: &LabeledGraph) -> Vec<u8> {
    InstanceFile::from_graph(graph).to_bytes()
}

macro_rules! bundled {
    ($($name:literal),*) => {
        /// Instance files shipped with the crate, by figure name.
        pub fn bundled_instance(name: &str) -> Option<&'static str> {
            match name {
                $($name => Some(include_str!(concat!("../fixtures/", $name, ".json"))),)*
                _ => None,
            }
        }
    };
}

bundled!("fig1a", "fig1b", "fig1c", "fig3", "fig3b", "fig5", "fig6", "case1", "case2");

pub const RESULT_COLUMNS: [&str; 10] = [
    "instance_id",
    "mechanism",
    "bipartition",
    "seed",
    "opt_size",
    "exp_num",
    "exp_den",
    "ratio_num",
    "ratio_den",
    "detail",
];

/// One line of a results table. Rationals are stored as numerator and
/// denominator columns; a ratio that is not a number leaves both empty and
/// says why in `detail`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ResultRow {
    pub instance_id: String,
    pub mechanism: String,
    pub bipartition: Option<String>,
    pub seed: Option<u64>,
    pub opt_size: Option<usize>,
    pub expected: Option<BigRational>,
    pub ratio: Option<Ratio>,
    pub detail: String,
}

impl ResultRow {
    pub fn new(instance_id: impl Into<String>, mechanism: impl Into<String>) -> Self {
        ResultRow {
            instance_id: instance_id.into(),
            mechanism: mechanism.into(),
            ..ResultRow::default()
        }
    }

    pub fn approx(instance_id: &str, mechanism: &str, report: &ApproxReport) -> Self {
        ResultRow {
            opt_size: Some(report.optimum),
            expected: Some(report.expected_size.clone()),
            ratio: Some(report.ratio.clone()),
            ..ResultRow::new(instance_id, mechanism)
        }
    }

    /// One outcome of a mechanism: its probability in the expected-value
    /// columns, the matching and utility vector in `detail`.
    pub fn outcome(instance_id: &str, mechanism: &str, graph: &LabeledGraph, outcome: &Outcome) -> Self {
        let u = utilities_unchecked(graph, &outcome.matching);
        let mut detail = format!("matching={} u={}", outcome.matching, u);
        if !outcome.label.is_empty() {
            detail = format!("outcome={} {detail}", outcome.label);
        }
        ResultRow {
            expected: Some(outcome.probability.clone()),
            detail,
            ..ResultRow::new(instance_id, mechanism)
        }
    }

    /// A profitable deviation: the gain in the expected-value columns.
    pub fn violation(instance_id: &str, mechanism: &str, violation: &SpViolation) -> Self {
        ResultRow {
            expected: Some(violation.gain()),
            detail: format!("violation {violation}"),
            ..ResultRow::new(instance_id, mechanism)
        }
    }

    fn record(&self) -> [String; 10] {
        let opt = |x: Option<String>| x.unwrap_or_default();
        let (exp_num, exp_den) = match &self.expected {
            Some(r) => (r.numer().to_string(), r.denom().to_string()),
            None => (String::new(), String::new()),
        };
        let mut detail = self.detail.clone();
        let (ratio_num, ratio_den) = match &self.ratio {
            Some(Ratio::Finite(r)) => (r.numer().to_string(), r.denom().to_string()),
            Some(other) => {
                detail = if detail.is_empty() {
                    format!("ratio={other}")
                } else {
                    format!("ratio={other} {detail}")
                };
                (String::new(), String::new())
            }
            None => (String::new(), String::new()),
        };
        [
            self.instance_id.clone(),
            self.mechanism.clone(),
            opt(self.bipartition.clone()),
            opt(self.seed.map(|s| s.to_string())),
            opt(self.opt_size.map(|s| s.to_string())),
            exp_num,
            exp_den,
            ratio_num,
            ratio_den,
            detail,
        ]
    }
}

pub fn write_results(rows: &[ResultRow]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| Error::Csv(e.to_string());
    w.write_record(RESULT_COLUMNS).map_err(csv_err)?;
    for row in rows {
        w.write_record(row.record()).map_err(csv_err)?;
    }
    w.into_inner().map_err(|e| Error::Csv(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::figures::{figure, FIGURE_NAMES};

    #[test]
    fn bundled_files_match_the_figures() {
        for name in FIGURE_NAMES {
            let text = bundled_instance(name).unwrap();
            let file = InstanceFile::parse(text.as_bytes()).unwrap();
            assert_eq!(file.name.as_deref(), Some(*name));
            assert_eq!(file.to_graph().unwrap(), figure(name).unwrap(), "{name}");
            assert_eq!(file.to_bytes(), text.as_bytes(), "{name} is not in canonical form");
        }
        assert!(bundled_instance("fig2").is_none());
    }

    #[test]
    fn empty_graph_round_trips() {
        let g = LabeledGraph::from_owners(1, &[], []).unwrap();
        assert_eq!(read_instance(&write_instance(&g)).unwrap(), g);
    }

    #[test]
    fn errors_carry_positions() {
        let owner0 = br#"{"schema_version": 1, "agents": 2, "vertices": [[1, 1], [2, 0]], "edges": []}"#;
        let err = read_instance(owner0).unwrap_err().to_string();
        assert!(err.contains("vertices[1]"), "{err}");
        let broken = b"{\"schema_version\": 1,\n \"agents\": }";
        let err = read_instance(broken).unwrap_err().to_string();
        assert!(err.contains("line 2"), "{err}");
        let future = br#"{"schema_version": 9, "agents": 1, "vertices": [], "edges": []}"#;
        assert!(read_instance(future).is_err());
        let extra = br#"{"schema_version": 1, "agents": 1, "vertices": [], "edges": [], "weights": []}"#;
        assert!(read_instance(extra).is_err());
    }

    #[test]
    fn header_only_for_no_rows() {
        let bytes = write_results(&[]).unwrap();
        assert_eq!(String::from_utf8(bytes).unwrap(), format!("{}\n", RESULT_COLUMNS.join(",")));
    }

    #[test]
    fn rational_columns() {
        let report = ApproxReport {
            optimum: 2,
            expected_size: BigRational::from_integer(1.into()),
            ratio: Ratio::Finite(BigRational::from_integer(2.into())),
        };
        let bytes = write_results(&[ResultRow::approx("fig5", "mix", &report)]).unwrap();
        let text = String::from_utf8(bytes).unwrap();
        assert_eq!(text.lines().nth(1).unwrap(), "fig5,mix,,,2,1,1,2,1,");
    }
}
