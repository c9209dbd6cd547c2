//! Python bindings for `resdecomp`.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use serde::Serialize;
use serde_json::Value;

use resdecomp::edgelist::{parse_edge_list, write_edge_list};
use resdecomp::{
    BoundConstants, DecompositionConfig, Error, Family, SketchConfig, SolverOptions, WeightedGraph,
};

fn to_py_err(e: Error) -> PyErr {
    match e {
        Error::InvalidWeight { .. }
        | Error::EdgeOutOfRange { .. }
        | Error::VertexOutOfRange { .. }
        | Error::InvalidParameter(_)
        | Error::NonZeroSum { .. }
        | Error::NotAPartition(_)
        | Error::Parse { .. } => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn value_to_py(py: Python<'_>, value: &Value) -> PyResult<Py<PyAny>> {
    Ok(match value {
        Value::Null => py.None(),
        Value::Bool(b) => b.into_pyobject(py)?.to_owned().into_any().unbind(),
        Value::Number(n) => match (n.as_u64(), n.as_i64()) {
            (Some(u), _) => u.into_pyobject(py)?.into_any().unbind(),
            (None, Some(i)) => i.into_pyobject(py)?.into_any().unbind(),
            _ => n
                .as_f64()
                .unwrap_or(f64::NAN)
                .into_pyobject(py)?
                .into_any()
                .unbind(),
        },
        Value::String(s) => s.into_pyobject(py)?.into_any().unbind(),
        Value::Array(items) => {
            let list = PyList::empty(py);
            for item in items {
                list.append(value_to_py(py, item)?)?;
            }
            list.into_any().unbind()
        }
        Value::Object(map) => {
            let dict = PyDict::new(py);
            for (k, v) in map {
                dict.set_item(k, value_to_py(py, v)?)?;
            }
            dict.into_any().unbind()
        }
    })
}

fn to_py<T: Serialize>(py: Python<'_>, v: &T) -> PyResult<Py<PyAny>> {
    let value = serde_json::to_value(v).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    value_to_py(py, &value)
}

fn sketch(seed: u64, beta: Option<f64>) -> SketchConfig {
    let mut cfg = SketchConfig::default().with_seed(seed);
    if let Some(beta) = beta {
        cfg.beta = beta;
    }
    cfg
}

fn solver(zeta: f64) -> SolverOptions {
    SolverOptions::default().with_zeta(zeta)
}

/// Undirected graph with positive edge weights.
#[pyclass(name = "Graph", module = "resdecomp_py", frozen)]
struct PyGraph {
    inner: WeightedGraph,
}

#[pymethods]
impl PyGraph {
    /// `Graph(n, [(u, v, w), ...])`. Parallel edges merge; self-loops are dropped.
    #[new]
    fn new(n: usize, edges: Vec<(usize, usize, f64)>) -> PyResult<Self> {
        Ok(Self {
            inner: WeightedGraph::from_edges(n, &edges).map_err(to_py_err)?,
        })
    }

    /// Parses the whitespace-separated `u v w` edge-list format.
    #[staticmethod]
    fn from_edge_list(text: &str) -> PyResult<Self> {
        Ok(Self {
            inner: parse_edge_list(text).map_err(to_py_err)?,
        })
    }

    fn to_edge_list(&self) -> String {
        write_edge_list(&self.inner)
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn m(&self) -> usize {
        self.inner.m()
    }

    #[getter]
    fn total_weight(&self) -> f64 {
        self.inner.total_weight()
    }

    fn edges(&self) -> Vec<(usize, usize, f64)> {
        self.inner.edges().collect()
    }

    fn degree(&self, v: usize) -> PyResult<f64> {
        if v >= self.inner.n() {
            return Err(to_py_err(Error::VertexOutOfRange {
                vertex: v,
                n: self.inner.n(),
            }));
        }
        Ok(self.inner.degree(v))
    }

    fn volume(&self, vertices: Vec<usize>) -> PyResult<f64> {
        self.inner.volume(&vertices).map_err(to_py_err)
    }

    /// Boundary weight, volume and conductance (None for zero volume).
    fn cut_stats(&self, py: Python<'_>, vertices: Vec<usize>) -> PyResult<Py<PyAny>> {
        to_py(py, &self.inner.cut_stats(&vertices).map_err(to_py_err)?)
    }

    fn connected_components(&self) -> Vec<Vec<usize>> {
        self.inner.connected_components()
    }

    fn is_connected(&self) -> bool {
        self.inner.is_connected()
    }

    /// Returns the induced subgraph and the map from its ids to ours.
    fn induced_subgraph(&self, vertices: Vec<usize>) -> PyResult<(PyGraph, Vec<usize>)> {
        let (g, map) = self.inner.induced_subgraph(&vertices).map_err(to_py_err)?;
        Ok((PyGraph { inner: g }, map))
    }

    fn scaled(&self, factor: f64) -> PyResult<PyGraph> {
        Ok(PyGraph {
            inner: self.inner.scaled(factor).map_err(to_py_err)?,
        })
    }

    fn __len__(&self) -> usize {
        self.inner.n()
    }

    fn __repr__(&self) -> String {
        format!(
            "Graph(n={}, m={}, total_weight={})",
            self.inner.n(),
            self.inner.m(),
            self.inner.total_weight()
        )
    }
}

/// Synthetic unit-weight graphs: `hypercube(dim)`, `grid2d(side)`,
/// `complete(n)`, `random-regular(n, degree, seed)`, `barbell(clique_size)`.
#[pyfunction]
#[pyo3(signature = (family, *, dim=None, side=None, n=None, degree=None, seed=0, clique_size=None))]
fn generate(
    family: &str,
    dim: Option<u32>,
    side: Option<usize>,
    n: Option<usize>,
    degree: Option<usize>,
    seed: u64,
    clique_size: Option<usize>,
) -> PyResult<PyGraph> {
    let need = |v: Option<usize>, name: &str| {
        v.ok_or_else(|| PyValueError::new_err(format!("{family} needs `{name}`")))
    };
    let family = match family {
        "hypercube" => Family::Hypercube {
            dim: dim.ok_or_else(|| PyValueError::new_err("hypercube needs `dim`"))?,
        },
        "grid2d" => Family::Grid2d {
            side: need(side, "side")?,
        },
        "complete" => Family::Complete { n: need(n, "n")? },
        "random-regular" | "random_regular" => Family::RandomRegular {
            n: need(n, "n")?,
            degree: need(degree, "degree")?,
            seed,
        },
        "barbell" => Family::Barbell {
            clique_size: need(clique_size, "clique_size")?,
        },
        other => return Err(PyValueError::new_err(format!("unknown family {other:?}"))),
    };
    Ok(PyGraph {
        inner: resdecomp::generate(family).map_err(to_py_err)?,
    })
}

/// Effective resistance from the dense pseudo-inverse.
#[pyfunction]
fn exact_reff(g: &PyGraph, s: usize, t: usize) -> PyResult<f64> {
    resdecomp::exact_reff(&g.inner, s, t).map_err(to_py_err)
}

/// Potentials of a unit `s → t` flow, shifted so `t` sits at 0.
#[pyfunction]
#[pyo3(signature = (g, s, t, zeta=1e-8))]
fn st_potential(py: Python<'_>, g: &PyGraph, s: usize, t: usize, zeta: f64) -> PyResult<Py<PyAny>> {
    let p = resdecomp::st_potential(&g.inner, s, t, &solver(zeta)).map_err(to_py_err)?;
    let dict = PyDict::new(py);
    dict.set_item("values", &p.values)?;
    dict.set_item("reff", p.drop())?;
    dict.set_item("eta", p.eta)?;
    dict.set_item("zeta", p.zeta)?;
    Ok(dict.into_any().unbind())
}

#[pyfunction]
#[pyo3(signature = (g, u, seed=0, beta=None, zeta=1e-8))]
fn approx_reff_from_source(
    g: &PyGraph,
    u: usize,
    seed: u64,
    beta: Option<f64>,
    zeta: f64,
) -> PyResult<Vec<f64>> {
    resdecomp::approx_reff_from_source(&g.inner, u, &sketch(seed, beta), &solver(zeta))
        .map_err(to_py_err)
}

/// `(u, v, estimate)` with `Reff(u, v)` at least a third of the diameter.
#[pyfunction]
#[pyo3(signature = (g, seed=0, beta=None, zeta=1e-8))]
fn furthest_pair(
    g: &PyGraph,
    seed: u64,
    beta: Option<f64>,
    zeta: f64,
) -> PyResult<(usize, usize, f64)> {
    let p = resdecomp::furthest_pair(&g.inner, &sketch(seed, beta), &solver(zeta))
        .map_err(to_py_err)?;
    Ok((p.u, p.v, p.estimate))
}

#[pyfunction]
#[pyo3(signature = (g, epsilon=0.25, seed=0, beta=None, zeta=1e-8))]
fn find_sparse_cut(
    py: Python<'_>,
    g: &PyGraph,
    epsilon: f64,
    seed: u64,
    beta: Option<f64>,
    zeta: f64,
) -> PyResult<Py<PyAny>> {
    let cut = resdecomp::find_sparse_cut(&g.inner, epsilon, &sketch(seed, beta), &solver(zeta))
        .map_err(to_py_err)?;
    to_py(py, &cut)
}

/// Returns `{"blocks": [...], "report": {...}}`.
#[pyfunction]
#[pyo3(signature = (g, delta, c_r=1.0, seed=0, allow_small_target=false))]
fn partition(
    py: Python<'_>,
    g: &PyGraph,
    delta: f64,
    c_r: f64,
    seed: u64,
    allow_small_target: bool,
) -> PyResult<Py<PyAny>> {
    let config = if allow_small_target {
        DecompositionConfig::relaxed(&g.inner, delta, c_r)
    } else {
        DecompositionConfig::new(&g.inner, delta, c_r)
    }
    .map_err(to_py_err)?;
    let (p, report) = py
        .detach(|| {
            resdecomp::partition_with(
                &g.inner,
                &config,
                &sketch(seed, None),
                &SolverOptions::default(),
            )
        })
        .map_err(to_py_err)?;
    let dict = PyDict::new(py);
    dict.set_item("blocks", p.blocks)?;
    dict.set_item("report", to_py(py, &report)?)?;
    Ok(dict.into_any().unbind())
}

#[pyfunction]
#[pyo3(signature = (g, blocks, delta, c_loss=8.0, c_res=32.0, seed=0))]
fn verify_partition(
    py: Python<'_>,
    g: &PyGraph,
    blocks: Vec<Vec<usize>>,
    delta: f64,
    c_loss: f64,
    c_res: f64,
    seed: u64,
) -> PyResult<Py<PyAny>> {
    let constants = BoundConstants { c_loss, c_res };
    let v = resdecomp::verify_partition(
        &g.inner,
        &blocks,
        delta,
        constants,
        &sketch(seed, None),
        &SolverOptions::default(),
    )
    .map_err(to_py_err)?;
    let out = to_py(py, &v)?;
    out.bind(py).set_item("passed", v.passed())?;
    Ok(out)
}

#[pymodule]
fn resdecomp_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    m.add_function(wrap_pyfunction!(exact_reff, m)?)?;
    m.add_function(wrap_pyfunction!(st_potential, m)?)?;
    m.add_function(wrap_pyfunction!(approx_reff_from_source, m)?)?;
    m.add_function(wrap_pyfunction!(furthest_pair, m)?)?;
    m.add_function(wrap_pyfunction!(find_sparse_cut, m)?)?;
    m.add_function(wrap_pyfunction!(partition, m)?)?;
    m.add_function(wrap_pyfunction!(verify_partition, m)?)?;
    Ok(())
}
