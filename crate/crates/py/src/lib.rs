//! Python bindings. Matchings cross the boundary as lists of `(u, v)`
//! tuples and exact rationals as `fractions.Fraction`.

use num_bigint::BigInt;
use num_rational::BigRational;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use mm::audit::Ratio;
use mm::{LabeledGraph, Limits, Matching, MechanismKind, MixMode};

type Pair = (u32, u32);
type PyOutcome = (Py<PyAny>, String, Vec<Pair>);
type PyViolation = (u32, Vec<u32>, Py<PyAny>, Py<PyAny>);

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn limits() -> PyResult<Limits> {
    Limits::from_env().map_err(value_error)
}

fn fraction(py: Python<'_>, r: &BigRational) -> PyResult<Py<PyAny>> {
    let (num, den): (BigInt, BigInt) = (r.numer().clone(), r.denom().clone());
    Ok(py.import("fractions")?.getattr("Fraction")?.call1((num, den))?.unbind())
}

fn pairs(m: &Matching) -> Vec<Pair> {
    m.edges().iter().map(|e| e.endpoints()).collect()
}

/// An agent-labeled graph.
#[pyclass(name = "Graph", module = "mechmatch", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct Graph {
    inner: LabeledGraph,
}

#[pymethods]
impl Graph {
    /// Vertex `k` (1-based) is owned by `owners[k-1]`.
    #[new]
    fn new(agents: u32, owners: Vec<u32>, edges: Vec<Pair>) -> PyResult<Self> {
        let inner = LabeledGraph::from_owners(agents, &owners, edges).map_err(value_error)?;
        Ok(Graph { inner })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let inner = mm::io::read_instance(text.as_bytes()).map_err(value_error)?;
        Ok(Graph { inner })
    }

    #[staticmethod]
    fn figure(name: &str) -> PyResult<Self> {
        let inner = mm::figures::figure(name).map_err(value_error)?;
        Ok(Graph { inner })
    }

    #[staticmethod]
    fn random(vertices: u32, agents: u32, p: f64, seed: u64) -> PyResult<Self> {
        let generator = mm::generate::Generator::Random { vertices, agents, p };
        let inner = mm::generate::generate(&generator, seed).map_err(value_error)?;
        Ok(Graph { inner })
    }

    fn to_json(&self) -> String {
        String::from_utf8(mm::io::write_instance(&self.inner)).expect("instance files are UTF-8")
    }

    #[getter]
    fn num_agents(&self) -> u32 {
        self.inner.num_agents()
    }

    /// `(id, owner)` pairs.
    #[getter]
    fn vertices(&self) -> Vec<Pair> {
        self.inner.labeled_vertices().to_vec()
    }

    #[getter]
    fn edges(&self) -> Vec<Pair> {
        self.inner.edges().iter().map(|e| e.endpoints()).collect()
    }

    /// Utility of every agent under `matching`.
    fn utilities(&self, matching: Vec<Pair>) -> PyResult<Vec<u32>> {
        let m = Matching::from_pairs(&matching).map_err(value_error)?;
        let u = mm::utilities(&self.inner, &m).map_err(value_error)?;
        Ok((1..=self.inner.num_agents()).map(|a| u.get(a)).collect())
    }

    fn __repr__(&self) -> String {
        format!(
            "Graph(agents={}, vertices={}, edges={})",
            self.inner.num_agents(),
            self.inner.vertex_count(),
            self.inner.edges().len()
        )
    }
}

fn build(
    graph: &Graph,
    mechanism: &str,
    bipartition: Option<&str>,
    seed: Option<u64>,
) -> PyResult<Box<dyn mm::Mechanism>> {
    let kind: MechanismKind = mechanism.parse().map_err(value_error)?;
    let mode = seed.map_or(MixMode::Exact, MixMode::Sampled);
    kind.instantiate(graph.inner.num_agents(), bipartition, mode, limits()?)
        .map_err(value_error)
}

/// Match_Π with `first` as the agents of the first side.
#[pyfunction]
fn match_pi(graph: &Graph, first: Vec<u32>) -> PyResult<Vec<Pair>> {
    let bip = mm::Bipartition::new(graph.inner.num_agents(), first).map_err(value_error)?;
    let m = mm::mechanisms::match_pi(&graph.inner, &bip).map_err(value_error)?;
    Ok(pairs(&m))
}

/// A maximum-cardinality matching.
#[pyfunction]
fn max_matching(graph: &Graph) -> Vec<Pair> {
    pairs(&mm::solvers::max_cardinality_matching(&graph.inner))
}

/// Every outcome of a mechanism as `(probability, label, matching)`.
#[pyfunction]
#[pyo3(signature = (graph, mechanism, bipartition=None, seed=None))]
fn solve(
    py: Python<'_>,
    graph: &Graph,
    mechanism: &str,
    bipartition: Option<&str>,
    seed: Option<u64>,
) -> PyResult<Vec<PyOutcome>> {
    let mech = build(graph, mechanism, bipartition, seed)?;
    let dist = mech.outcomes(&graph.inner).map_err(value_error)?;
    dist.outcomes()
        .iter()
        .map(|o| Ok((fraction(py, &o.probability)?, o.label.clone(), pairs(&o.matching))))
        .collect()
}

/// Profitable deviations as `(agent, hidden, truthful, deviation)`.
#[pyfunction]
#[pyo3(signature = (graph, mechanism, bipartition=None))]
fn verify_sp(
    py: Python<'_>,
    graph: &Graph,
    mechanism: &str,
    bipartition: Option<&str>,
) -> PyResult<Vec<PyViolation>> {
    let mech = build(graph, mechanism, bipartition, None)?;
    let found = mm::strategy::verify_sp(&graph.inner, mech.as_ref(), &limits()?).map_err(value_error)?;
    found
        .iter()
        .map(|v| {
            Ok((
                v.agent,
                v.hidden.iter().copied().collect(),
                fraction(py, &v.truthful)?,
                fraction(py, &v.deviation)?,
            ))
        })
        .collect()
}

/// `(optimum, expected size, ratio)`; a ratio that is not a number comes
/// back as the string "unbounded" or "undefined".
#[pyfunction]
#[pyo3(signature = (graph, mechanism, bipartition=None))]
fn approx_ratio(
    py: Python<'_>,
    graph: &Graph,
    mechanism: &str,
    bipartition: Option<&str>,
) -> PyResult<(usize, Py<PyAny>, Py<PyAny>)> {
    let mech = build(graph, mechanism, bipartition, None)?;
    let report = mm::audit::approx_ratio(&graph.inner, mech.as_ref()).map_err(value_error)?;
    let ratio = match &report.ratio {
        Ratio::Finite(r) => fraction(py, r)?,
        other => other.to_string().into_pyobject(py)?.into_any().unbind(),
    };
    Ok((report.optimum, fraction(py, &report.expected_size)?, ratio))
}

/// The worked-example regression suite as `(name, passed, detail)`.
#[pyfunction]
fn fixtures() -> PyResult<Vec<(String, bool, String)>> {
    Ok(mm::audit::fixtures(&limits()?)
        .into_iter()
        .map(|r| (r.name.to_string(), r.passed, r.detail))
        .collect())
}

#[pymodule]
fn mechmatch(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Graph>()?;
    m.add_function(wrap_pyfunction!(match_pi, m)?)?;
    m.add_function(wrap_pyfunction!(max_matching, m)?)?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(verify_sp, m)?)?;
    m.add_function(wrap_pyfunction!(approx_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(fixtures, m)?)?;
    m.add("MECHANISMS", MechanismKind::NAMES.to_vec())?;
    m.add("FIGURES", mm::figures::FIGURE_NAMES.to_vec())?;
    Ok(())
}
