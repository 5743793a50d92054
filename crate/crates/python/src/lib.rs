//! Python bindings for `revgraph`. Result records come back as plain dicts.

use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use serde::Serialize;

use revgraph_core as rg;
use rg::branching::{self, BranchingConfig, Offspring};
use rg::cayley::{self, GraphSpec};
use rg::experiments::{self, Method, SweepConfig};
use rg::random_graph::{self, LambdaSpec, LazyParams, SampleConfig};
use rg::{GeneratorKind, GeneratorSet, Reversal, SignChangeTransposition};

fn err(e: rg::Error) -> PyErr {
    match e {
        rg::Error::Io(m) => PyOSError::new_err(m),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn json_to_py(py: Python<'_>, v: &serde_json::Value) -> PyResult<Py<PyAny>> {
    use serde_json::Value;
    Ok(match v {
        Value::Null => py.None(),
        Value::Bool(b) => b.into_pyobject(py)?.to_owned().into_any().unbind(),
        Value::Number(n) => {
            if let Some(u) = n.as_u64() {
                u.into_pyobject(py)?.into_any().unbind()
            } else if let Some(i) = n.as_i64() {
                i.into_pyobject(py)?.into_any().unbind()
            } else {
                n.as_f64()
                    .unwrap_or(f64::NAN)
                    .into_pyobject(py)?
                    .into_any()
                    .unbind()
            }
        }
        Value::String(s) => s.into_pyobject(py)?.into_any().unbind(),
        Value::Array(items) => {
            let items = items
                .iter()
                .map(|x| json_to_py(py, x))
                .collect::<PyResult<Vec<_>>>()?;
            PyList::new(py, items)?.into_any().unbind()
        }
        Value::Object(map) => {
            let d = PyDict::new(py);
            for (k, x) in map {
                d.set_item(k, json_to_py(py, x)?)?;
            }
            d.into_any().unbind()
        }
    })
}

fn to_py<T: Serialize>(py: Python<'_>, value: &T) -> PyResult<Py<PyAny>> {
    let v = serde_json::to_value(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    json_to_py(py, &v)
}

fn kind(name: &str) -> PyResult<GeneratorKind> {
    name.parse().map_err(err)
}

fn gens(n: usize, name: &str) -> PyResult<GeneratorSet> {
    GeneratorSet::new(kind(name)?, n).map_err(err)
}

fn rate(c: Option<f64>, lam: Option<f64>) -> PyResult<LambdaSpec> {
    match (c, lam) {
        (Some(c), None) => Ok(LambdaSpec::Scaled(c)),
        (None, Some(l)) => Ok(LambdaSpec::Absolute(l)),
        _ => Err(PyValueError::new_err("give exactly one of c or lam")),
    }
}

/// A signed permutation of {1..n}, written like `(+1,-3,+2)`.
#[pyclass(
    name = "SignedPerm",
    module = "pyrevgraph",
    frozen,
    skip_from_py_object
)]
#[derive(Clone)]
struct PySignedPerm(rg::SignedPerm);

#[pymethods]
impl PySignedPerm {
    #[new]
    fn new(entries: Vec<i16>) -> PyResult<Self> {
        rg::SignedPerm::new(entries).map(Self).map_err(err)
    }

    #[staticmethod]
    fn identity(n: usize) -> PyResult<Self> {
        rg::SignedPerm::identity(n).map(Self).map_err(err)
    }

    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        text.parse().map(Self).map_err(err)
    }

    #[staticmethod]
    fn unrank(n: usize, rank: u64) -> PyResult<Self> {
        rg::SignedPerm::unrank(n, rank).map(Self).map_err(err)
    }

    #[getter]
    fn entries(&self) -> Vec<i16> {
        self.0.entries().to_vec()
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    fn rank(&self) -> PyResult<u64> {
        self.0.rank().map_err(err)
    }

    fn compose(&self, other: PyRef<'_, Self>) -> PyResult<Self> {
        self.0.compose(&other.0).map(Self).map_err(err)
    }

    fn inverse(&self) -> Self {
        Self(self.0.inverse())
    }

    fn is_identity(&self) -> bool {
        self.0.is_identity()
    }

    fn apply_reversal(&self, i: usize, j: usize) -> PyResult<Self> {
        let r = Reversal::new(i, j).map_err(err)?;
        self.0.apply_reversal(r).map(Self).map_err(err)
    }

    fn apply_transposition(&self, i: usize, j: usize) -> PyResult<Self> {
        let t = SignChangeTransposition::new(i, j).map_err(err)?;
        self.0.apply_transposition(t).map(Self).map_err(err)
    }

    fn __mul__(&self, other: PyRef<'_, Self>) -> PyResult<Self> {
        self.compose(other)
    }

    fn __len__(&self) -> usize {
        self.0.n()
    }

    fn __eq__(&self, other: &Bound<'_, PyAny>) -> bool {
        other
            .cast::<Self>()
            .map(|o| o.get().0 == self.0)
            .unwrap_or(false)
    }

    fn __lt__(&self, other: PyRef<'_, Self>) -> bool {
        self.0 < other.0
    }

    fn __hash__(&self) -> u64 {
        use std::hash::{Hash, Hasher};
        let mut h = std::collections::hash_map::DefaultHasher::new();
        self.0.hash(&mut h);
        h.finish()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("SignedPerm('{}')", self.0)
    }
}

/// Generators of the Cayley graph on B_n, ordered by position pair.
#[pyfunction]
#[pyo3(signature = (n, kind = "reversals"))]
fn generators(n: usize, kind: &str) -> PyResult<Vec<PySignedPerm>> {
    Ok(gens(n, kind)?
        .generators()
        .into_iter()
        .map(PySignedPerm)
        .collect())
}

#[pyfunction]
#[pyo3(signature = (v, kind = "reversals"))]
fn neighbors(v: PyRef<'_, PySignedPerm>, kind: &str) -> PyResult<Vec<PySignedPerm>> {
    let g = gens(v.0.n(), kind)?;
    Ok(cayley::neighbors(&v.0, &g)
        .map_err(err)?
        .into_iter()
        .map(PySignedPerm)
        .collect())
}

#[pyfunction]
#[pyo3(signature = (v, w, kind = "reversals", max_depth = 64))]
fn bfs_distance(
    v: PyRef<'_, PySignedPerm>,
    w: PyRef<'_, PySignedPerm>,
    kind: &str,
    max_depth: u32,
) -> PyResult<Option<u32>> {
    let g = gens(v.0.n(), kind)?;
    cayley::bfs_distance(&v.0, &w.0, &g, max_depth).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (n, kind = "reversals"))]
fn diameter(py: Python<'_>, n: usize, kind: &str) -> PyResult<u32> {
    let spec = GraphSpec::new(gens(n, kind)?);
    py.detach(|| cayley::diameter(&spec)).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (epsilon, tol = branching::DEFAULT_TOL))]
fn survival_fixed_point(py: Python<'_>, epsilon: f64, tol: f64) -> PyResult<Py<PyAny>> {
    to_py(
        py,
        &branching::survival_fixed_point(epsilon, tol).map_err(err)?,
    )
}

#[pyfunction]
fn wp(py: Python<'_>, epsilon: f64, n: usize) -> PyResult<Py<PyAny>> {
    to_py(py, &branching::wp(epsilon, n).map_err(err)?)
}

/// Samples the random subgraph explicitly and returns its component sizes.
#[pyfunction]
#[pyo3(signature = (n, seed, c = None, lam = None, kind = "reversals"))]
fn sample_components(
    py: Python<'_>,
    n: usize,
    seed: u64,
    c: Option<f64>,
    lam: Option<f64>,
    kind: &str,
) -> PyResult<Py<PyAny>> {
    let config = SampleConfig::new(gens(n, kind)?, rate(c, lam)?, seed).map_err(err)?;
    let (stats, edges) = py
        .detach(|| {
            let g = random_graph::sample_subgraph_explicit(&config)?;
            Ok((random_graph::components(&g), g.edge_count()))
        })
        .map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("lambda", config.lambda)?;
    d.set_item("edges", edges)?;
    d.set_item("vertex_count", stats.vertex_count)?;
    d.set_item("largest", stats.largest)?;
    d.set_item("second", stats.second)?;
    d.set_item("largest_fraction", stats.largest_fraction())?;
    d.set_item("sizes", stats.sizes)?;
    Ok(d.into_any().unbind())
}

/// Explores the component of `start` (default: identity) without building the graph.
#[pyfunction]
#[pyo3(signature = (n, seed, c = None, lam = None, cutoff = None, start = None, kind = "reversals"))]
#[allow(clippy::too_many_arguments)]
fn explore(
    py: Python<'_>,
    n: usize,
    seed: u64,
    c: Option<f64>,
    lam: Option<f64>,
    cutoff: Option<u64>,
    start: Option<PyRef<'_, PySignedPerm>>,
    kind: &str,
) -> PyResult<Py<PyAny>> {
    let g = gens(n, kind)?;
    let lambda = rate(c, lam)?.resolve(&g).map_err(err)?;
    let params = LazyParams::new(
        g,
        lambda,
        seed,
        cutoff.unwrap_or_else(|| random_graph::default_cutoff(n)),
    );
    let start = match start {
        Some(s) => s.0.clone(),
        None => rg::SignedPerm::identity(n).map_err(err)?,
    };
    let res = py
        .detach(|| random_graph::explore_component_lazy(&params, &start))
        .map_err(err)?;
    to_py(py, &res)
}

#[pyfunction]
#[pyo3(signature = (n, trials, seed, c = None, lam = None, cutoff = None, kind = "reversals"))]
#[allow(clippy::too_many_arguments)]
fn estimate_giant_fraction(
    py: Python<'_>,
    n: usize,
    trials: u64,
    seed: u64,
    c: Option<f64>,
    lam: Option<f64>,
    cutoff: Option<u64>,
    kind: &str,
) -> PyResult<Py<PyAny>> {
    let g = gens(n, kind)?;
    let lambda = rate(c, lam)?.resolve(&g).map_err(err)?;
    let cutoff = cutoff.unwrap_or_else(|| random_graph::default_cutoff(n));
    let est = py
        .detach(|| random_graph::estimate_giant_fraction(g, lambda, cutoff, trials, seed))
        .map_err(err)?;
    to_py(py, &est)
}

/// Monte Carlo survival of a branching process. `offspring` is one of
/// "binomial", "root-binomial" or "poisson".
#[pyfunction]
#[pyo3(signature = (offspring, trials, seed, m = None, p = None, lam = None, population_cap = 10_000, max_generations = 200))]
#[allow(clippy::too_many_arguments)]
fn simulate_branching(
    py: Python<'_>,
    offspring: &str,
    trials: u64,
    seed: u64,
    m: Option<u64>,
    p: Option<f64>,
    lam: Option<f64>,
    population_cap: u64,
    max_generations: u32,
) -> PyResult<Py<PyAny>> {
    let need_mp = || -> PyResult<(u64, f64)> {
        let m = m.ok_or_else(|| PyValueError::new_err("m is required"))?;
        let p = p.ok_or_else(|| PyValueError::new_err("p is required"))?;
        Ok((m, p))
    };
    let law = match offspring {
        "binomial" => {
            let (m, p) = need_mp()?;
            Offspring::Binomial { m, p }
        }
        "root-binomial" => {
            let (m, p) = need_mp()?;
            Offspring::RootBinomial { m, p }
        }
        "poisson" => Offspring::Poisson {
            lambda: lam.ok_or_else(|| PyValueError::new_err("lam is required"))?,
        },
        other => {
            return Err(PyValueError::new_err(format!(
                "unknown offspring law {other:?}"
            )))
        }
    };
    let config = BranchingConfig {
        offspring: law,
        max_generations,
        population_cap,
    };
    let est = py
        .detach(|| branching::simulate_branching(&config, trials, seed))
        .map_err(err)?;
    to_py(py, &est)
}

#[pyfunction]
fn grow_restricted_tree(py: Python<'_>, n: usize, lam: f64, seed: u64) -> PyResult<Py<PyAny>> {
    let run = py
        .detach(|| branching::grow_restricted_tree(n, lam, seed))
        .map_err(err)?;
    to_py(py, &run)
}

#[pyfunction]
fn run_restricted_trees(
    py: Python<'_>,
    n: usize,
    lam: f64,
    runs: u64,
    seed: u64,
) -> PyResult<Py<PyAny>> {
    let batch = py
        .detach(|| branching::run_restricted_trees(n, lam, runs, seed))
        .map_err(err)?;
    to_py(py, &batch)
}

#[pyfunction]
#[pyo3(signature = (block_lengths = None))]
fn critical_rate_table(py: Python<'_>, block_lengths: Option<Vec<f64>>) -> PyResult<Py<PyAny>> {
    let lengths = block_lengths.unwrap_or_else(|| experiments::YEAST_BLOCK_LENGTHS.to_vec());
    to_py(
        py,
        &experiments::critical_rate_table(&lengths).map_err(err)?,
    )
}

/// Component-size sweep; returns `{"rows": [...], "trials": [...]}`.
#[pyfunction]
#[pyo3(signature = (n_values, c_values, trials, seed, method = "explicit", kind = "reversals", cutoff = None))]
#[allow(clippy::too_many_arguments)]
fn threshold_sweep(
    py: Python<'_>,
    n_values: Vec<usize>,
    c_values: Vec<f64>,
    trials: u64,
    seed: u64,
    method: &str,
    kind: &str,
    cutoff: Option<u64>,
) -> PyResult<Py<PyAny>> {
    let config = SweepConfig {
        method: method.parse::<Method>().map_err(err)?,
        gens: self::kind(kind)?,
        cutoff: cutoff
            .map(experiments::CutoffRule::Fixed)
            .unwrap_or_default(),
        ..SweepConfig::new(n_values, c_values, trials, seed)
    };
    let out = py
        .detach(|| experiments::run_threshold_sweep(&config))
        .map_err(err)?;
    to_py(py, &out)
}

#[pymodule]
fn pyrevgraph(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySignedPerm>()?;
    m.add_function(wrap_pyfunction!(generators, m)?)?;
    m.add_function(wrap_pyfunction!(neighbors, m)?)?;
    m.add_function(wrap_pyfunction!(bfs_distance, m)?)?;
    m.add_function(wrap_pyfunction!(diameter, m)?)?;
    m.add_function(wrap_pyfunction!(survival_fixed_point, m)?)?;
    m.add_function(wrap_pyfunction!(wp, m)?)?;
    m.add_function(wrap_pyfunction!(sample_components, m)?)?;
    m.add_function(wrap_pyfunction!(explore, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_giant_fraction, m)?)?;
    m.add_function(wrap_pyfunction!(simulate_branching, m)?)?;
    m.add_function(wrap_pyfunction!(grow_restricted_tree, m)?)?;
    m.add_function(wrap_pyfunction!(run_restricted_trees, m)?)?;
    m.add_function(wrap_pyfunction!(critical_rate_table, m)?)?;
    m.add_function(wrap_pyfunction!(threshold_sweep, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
