//! Python bindings: graph generators, graph metrics, pair Hamiltonian ground
//! states and coboson fidelities.

use coboson::basis::PairBasis;
use coboson::coboson::{profile_from_ground_state, run_fidelity};
use coboson::eigen::{ground_state as solve, SolverOptions, DEFAULT_MAX_ITER, DEFAULT_TOL};
use coboson::graph::{self as core_graph, Boundary, LoadOptions};
use coboson::hamiltonian::{build_hamiltonian, ModelOptions};
use coboson::{metrics, Error};
use pyo3::exceptions::{PyOSError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Io { .. } => PyOSError::new_err(e.to_string()),
        Error::NoConvergence { .. }
        | Error::SignIndefinite(_)
        | Error::Degenerate(_)
        | Error::ReducibleBasis { .. } => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn boundary(s: &str) -> PyResult<Boundary> {
    s.parse().map_err(to_py)
}

/// Simple connected graph on nodes `0..num_nodes`.
#[pyclass(frozen, skip_from_py_object, module = "coboson_py")]
#[derive(Clone)]
pub struct Graph {
    inner: core_graph::Graph,
}

impl From<core_graph::Graph> for Graph {
    fn from(inner: core_graph::Graph) -> Self {
        Graph { inner }
    }
}

#[pymethods]
impl Graph {
    #[new]
    fn new(num_nodes: usize, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        core_graph::Graph::new(num_nodes, edges, core_graph::GraphMeta::custom())
            .map(Graph::from)
            .map_err(to_py)
    }

    /// Parses the edge-list format written by `to_edge_list`.
    #[staticmethod]
    #[pyo3(signature = (text, allow_disconnected = false))]
    fn from_edge_list(text: &str, allow_disconnected: bool) -> PyResult<Self> {
        core_graph::parse_graph(text, LoadOptions { allow_disconnected })
            .map(Graph::from)
            .map_err(to_py)
    }

    #[staticmethod]
    #[pyo3(signature = (path, allow_disconnected = false))]
    fn load(path: &str, allow_disconnected: bool) -> PyResult<Self> {
        core_graph::load_graph(path, LoadOptions { allow_disconnected })
            .map(Graph::from)
            .map_err(to_py)
    }

    fn save(&self, path: &str) -> PyResult<()> {
        core_graph::save_graph(&self.inner, path).map_err(to_py)
    }

    fn to_edge_list(&self) -> String {
        core_graph::write_graph(&self.inner)
    }

    #[getter]
    fn num_nodes(&self) -> usize {
        self.inner.num_nodes()
    }

    #[getter]
    fn num_edges(&self) -> usize {
        self.inner.num_edges()
    }

    #[getter]
    fn family(&self) -> &'static str {
        self.inner.meta().family.as_str()
    }

    #[getter]
    fn boundary(&self) -> &'static str {
        self.inner.meta().boundary.as_str()
    }

    #[getter]
    fn nu(&self) -> Option<usize> {
        self.inner.meta().nu
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.edges().to_vec()
    }

    fn neighbors(&self, node: usize) -> PyResult<Vec<usize>> {
        if node >= self.inner.num_nodes() {
            return Err(to_py(Error::NodeOutOfRange {
                node,
                num_nodes: self.inner.num_nodes(),
            }));
        }
        Ok(self.inner.neighbors(node).to_vec())
    }

    fn degree(&self, node: usize) -> PyResult<usize> {
        self.neighbors(node).map(|n| n.len())
    }

    fn __len__(&self) -> usize {
        self.inner.num_nodes()
    }

    fn __eq__(&self, other: &Graph) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        let m = self.inner.meta();
        format!(
            "Graph(family='{}', boundary='{}', num_nodes={}, num_edges={})",
            m.family,
            m.boundary,
            self.inner.num_nodes(),
            self.inner.num_edges()
        )
    }
}

#[pyfunction]
#[pyo3(signature = (m, boundary = "open"))]
fn chain(m: usize, boundary: &str) -> PyResult<Graph> {
    core_graph::make_chain(m, self::boundary(boundary)?)
        .map(Graph::from)
        .map_err(to_py)
}

/// `n x m` square lattice; `m` defaults to `n`. Closed means a torus.
#[pyfunction]
#[pyo3(signature = (n, m = None, boundary = "open"))]
fn square_lattice(n: usize, m: Option<usize>, boundary: &str) -> PyResult<Graph> {
    core_graph::make_square_lattice(n, m.unwrap_or(n), self::boundary(boundary)?)
        .map(Graph::from)
        .map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (n, m = None))]
fn triangular_lattice(n: usize, m: Option<usize>) -> PyResult<Graph> {
    core_graph::make_triangular_lattice(n, m.unwrap_or(n))
        .map(Graph::from)
        .map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (n, m = None))]
fn hexagonal_lattice(n: usize, m: Option<usize>) -> PyResult<Graph> {
    core_graph::make_hexagonal_lattice(n, m.unwrap_or(n))
        .map(Graph::from)
        .map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (level, boundary = "open"))]
fn sierpinski(level: usize, boundary: &str) -> PyResult<Graph> {
    core_graph::make_sierpinski(level, self::boundary(boundary)?)
        .map(Graph::from)
        .map_err(to_py)
}

#[pyfunction]
fn hanoi(level: usize) -> PyResult<Graph> {
    core_graph::make_hanoi(level)
        .map(Graph::from)
        .map_err(to_py)
}

#[pyfunction]
fn vicsek(nu: usize, level: usize) -> PyResult<Graph> {
    core_graph::make_vicsek(nu, level)
        .map(Graph::from)
        .map_err(to_py)
}

#[pyfunction]
fn star(m: usize) -> PyResult<Graph> {
    core_graph::make_star(m).map(Graph::from).map_err(to_py)
}

#[pyfunction]
fn complete(m: usize) -> PyResult<Graph> {
    core_graph::make_complete(m).map(Graph::from).map_err(to_py)
}

#[pyfunction]
fn average_path_length(g: &Graph) -> PyResult<f64> {
    metrics::average_path_length(&g.inner).map_err(to_py)
}

/// Betweenness per node; normalized by `(M-1)(M-2)/2` unless
/// `normalized=False`.
#[pyfunction]
#[pyo3(signature = (g, normalized = true))]
fn betweenness(g: &Graph, normalized: bool) -> PyResult<Vec<f64>> {
    if normalized {
        metrics::betweenness_centrality(&g.inner)
    } else {
        metrics::betweenness_raw(&g.inner)
    }
    .map_err(to_py)
}

#[pyfunction]
fn circuit_rank(g: &Graph) -> PyResult<usize> {
    metrics::circuit_rank(&g.inner).map_err(to_py)
}

/// Fits `L ~ M^(1/alpha)`; returns `(alpha, r_squared)`.
#[pyfunction]
fn fit_dimension(points: Vec<(usize, f64)>) -> PyResult<(f64, f64)> {
    let fit = metrics::fit_dimension(&points).map_err(to_py)?;
    Ok((fit.alpha, fit.r_squared))
}

/// Hard-core pair configurations as sorted site tuples, in basis order.
#[pyfunction]
fn basis_states(sites: usize, pairs: usize) -> PyResult<Vec<Vec<usize>>> {
    let basis = PairBasis::new(pairs, sites).map_err(to_py)?;
    Ok(basis.iter().map(|s| s[..pairs].to_vec()).collect())
}

fn model(nn_repulsion: bool) -> ModelOptions {
    ModelOptions {
        include_nn_repulsion: nn_repulsion,
    }
}

fn solver(tol: f64, seed: u64, max_iter: usize) -> SolverOptions {
    SolverOptions {
        max_iter,
        ..SolverOptions::default().with_tol(tol).with_seed(seed)
    }
}

/// Lowest eigenpair of the `pairs`-pair Hamiltonian (units of `J_eff`).
#[pyfunction]
#[pyo3(signature = (g, pairs = 1, nn_repulsion = true, tol = DEFAULT_TOL, seed = 0, max_iter = DEFAULT_MAX_ITER))]
fn ground_state<'py>(
    py: Python<'py>,
    g: &Graph,
    pairs: usize,
    nn_repulsion: bool,
    tol: f64,
    seed: u64,
    max_iter: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let gs = py
        .detach(|| {
            let (_, h) = build_hamiltonian(&g.inner, pairs, model(nn_repulsion))?;
            solve(&h, &solver(tol, seed, max_iter))
        })
        .map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("energy", gs.energy)?;
    d.set_item("amplitudes", gs.amplitudes)?;
    d.set_item("iterations", gs.iterations)?;
    d.set_item("residual", gs.residual_norm)?;
    d.set_item("gap", gs.gap)?;
    Ok(d)
}

/// Schmidt profile of a normalized single-pair state.
#[pyfunction]
fn coboson_profile<'py>(py: Python<'py>, c: Vec<f64>) -> PyResult<Bound<'py, PyDict>> {
    let p = profile_from_ground_state(&c).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("lambda", p.lambda)?;
    d.set_item("purity", p.purity)?;
    d.set_item("effective_size", p.effective_size)?;
    d.set_item("chi2", p.chi2)?;
    d.set_item("chi3", p.chi3)?;
    Ok(d)
}

/// Squared overlap between the `pairs`-pair ground state and the coboson
/// ansatz built from the single-pair ground state.
#[pyfunction]
#[pyo3(signature = (g, pairs = 2, nn_repulsion = true, tol = DEFAULT_TOL, seed = 0, max_iter = DEFAULT_MAX_ITER))]
fn fidelity<'py>(
    py: Python<'py>,
    g: &Graph,
    pairs: usize,
    nn_repulsion: bool,
    tol: f64,
    seed: u64,
    max_iter: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let run = py
        .detach(|| {
            run_fidelity(
                &g.inner,
                pairs,
                model(nn_repulsion),
                &solver(tol, seed, max_iter),
            )
        })
        .map_err(to_py)?;
    let r = run.record;
    let d = PyDict::new(py);
    d.set_item("M", r.num_sites)?;
    d.set_item("N", r.pairs)?;
    d.set_item("nn_repulsion", r.nn_repulsion)?;
    d.set_item("S", r.effective_size)?;
    d.set_item("chiN", r.chi_n)?;
    d.set_item("energy_ground", r.ground_energy)?;
    d.set_item("energy_ansatz", r.ansatz_energy)?;
    d.set_item("fidelity", r.fidelity)?;
    d.set_item("iterations", r.iterations)?;
    d.set_item("residual", r.residual)?;
    Ok(d)
}

#[pymodule]
pub fn coboson_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<Graph>()?;
    m.add_function(wrap_pyfunction!(chain, m)?)?;
    m.add_function(wrap_pyfunction!(square_lattice, m)?)?;
    m.add_function(wrap_pyfunction!(triangular_lattice, m)?)?;
    m.add_function(wrap_pyfunction!(hexagonal_lattice, m)?)?;
    m.add_function(wrap_pyfunction!(sierpinski, m)?)?;
    m.add_function(wrap_pyfunction!(hanoi, m)?)?;
    m.add_function(wrap_pyfunction!(vicsek, m)?)?;
    m.add_function(wrap_pyfunction!(star, m)?)?;
    m.add_function(wrap_pyfunction!(complete, m)?)?;
    m.add_function(wrap_pyfunction!(average_path_length, m)?)?;
    m.add_function(wrap_pyfunction!(betweenness, m)?)?;
    m.add_function(wrap_pyfunction!(circuit_rank, m)?)?;
    m.add_function(wrap_pyfunction!(fit_dimension, m)?)?;
    m.add_function(wrap_pyfunction!(basis_states, m)?)?;
    m.add_function(wrap_pyfunction!(ground_state, m)?)?;
    m.add_function(wrap_pyfunction!(coboson_profile, m)?)?;
    m.add_function(wrap_pyfunction!(fidelity, m)?)?;
    Ok(())
}
