//! Python bindings. Structured results come back as plain dicts.

use aqabound::algorithm_zoo::{self as zoo, BooleanFunctionSpec, GroverForm};
use aqabound::bound_engine as be;
use aqabound::dynamics::{self, MinTimeOptions, Schedule, ScheduleShape};
use aqabound::gap_analysis;
use aqabound::graph_tools::{self, Graph};
use aqabound::quantum_core::{overlap_sq, uncertainty as core_uncertainty};
use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use serde::Serialize;

create_exception!(pyaqabound, AqaboundError, PyException);

fn err(e: aqabound::Error) -> PyErr {
    AqaboundError::new_err(e.to_string())
}

fn to_py<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| AqaboundError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn function_spec(s: &str) -> PyResult<BooleanFunctionSpec> {
    s.parse().map_err(err)
}

fn schedule_shape(s: &str) -> PyResult<ScheduleShape> {
    s.parse().map_err(err)
}

fn graph(n: usize, edges: Vec<(usize, usize)>) -> PyResult<Graph> {
    Graph::from_edges(n, &edges).map_err(err)
}

/// An adiabatic problem instance: driver, problem Hamiltonian and states.
#[pyclass(name = "Problem", module = "pyaqabound", frozen)]
struct PyProblem {
    inner: zoo::Problem,
}

fn wrap(p: aqabound::Result<zoo::Problem>) -> PyResult<PyProblem> {
    p.map(|inner| PyProblem { inner }).map_err(err)
}

#[pymethods]
impl PyProblem {
    #[staticmethod]
    #[pyo3(signature = (n, function = "balanced:0"))]
    fn dj_das(n: usize, function: &str) -> PyResult<Self> {
        wrap(zoo::dj_das(n, &function_spec(function)?))
    }

    #[staticmethod]
    #[pyo3(signature = (n, function = "balanced:0"))]
    fn dj_wei(n: usize, function: &str) -> PyResult<Self> {
        wrap(zoo::dj_wei(n, &function_spec(function)?))
    }

    /// `secret` is a bit string, bit 0 first; its length is n.
    #[staticmethod]
    fn bernstein_vazirani(secret: &str) -> PyResult<Self> {
        let (n, s) = zoo::parse_bitstring(secret).map_err(err)?;
        wrap(zoo::bernstein_vazirani(n, s))
    }

    #[staticmethod]
    #[pyo3(signature = (n, marked, projector = false))]
    fn grover(n: usize, marked: Vec<u64>, projector: bool) -> PyResult<Self> {
        let form = if projector { GroverForm::Projector } else { GroverForm::Diagonal };
        wrap(zoo::grover(n, &marked, form))
    }

    #[staticmethod]
    fn ising(n: usize) -> PyResult<Self> {
        wrap(zoo::ising_counterexample(n))
    }

    #[staticmethod]
    #[pyo3(signature = (n, edges, k, deformed = false))]
    fn kclique(n: usize, edges: Vec<(usize, usize)>, k: usize, deformed: bool) -> PyResult<Self> {
        wrap(zoo::kclique(&graph(n, edges)?, k, deformed))
    }

    #[staticmethod]
    #[pyo3(signature = (n, p, seed, k, deformed = false))]
    fn kclique_random(n: usize, p: f64, seed: u64, k: usize, deformed: bool) -> PyResult<Self> {
        let g = graph_tools::random_graph(n, p, seed).map_err(err)?;
        wrap(zoo::kclique(&g, k, deformed))
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        wrap(zoo::Problem::from_json(text))
    }

    fn to_json(&self) -> PyResult<String> {
        self.inner.to_json().map_err(err)
    }

    #[getter]
    fn name(&self) -> &str {
        self.inner.name()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.basis().dim()
    }

    #[getter]
    fn meta<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, self.inner.meta())
    }

    /// `C(1) = |⟨Φ₁|Φ₀⟩|²`, or None without a target state.
    fn overlap(&self) -> PyResult<Option<f64>> {
        self.inner
            .phi1()
            .map(|phi1| overlap_sq(phi1, self.inner.phi0()))
            .transpose()
            .map_err(err)
    }

    /// δV, the standard deviation of H₁ in Φ₀.
    fn uncertainty(&self) -> PyResult<f64> {
        core_uncertainty(self.inner.h1(), self.inner.phi0()).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("Problem(name={:?}, dim={})", self.inner.name(), self.inner.basis().dim())
    }
}

#[pyfunction]
#[pyo3(signature = (problem, epsilon = 0.1, lambda_bar = 1.0, overlap = None))]
fn compute_bound<'py>(
    py: Python<'py>,
    problem: &PyProblem,
    epsilon: f64,
    lambda_bar: f64,
    overlap: Option<f64>,
) -> PyResult<Bound<'py, PyAny>> {
    let r = be::compute_bound_with_overlap(&problem.inner, epsilon, lambda_bar, overlap).map_err(err)?;
    to_py(py, &r)
}

/// Returns `(holds, residual)`.
#[pyfunction]
fn moments_check(problem: &PyProblem) -> PyResult<(bool, f64)> {
    let m = be::moments_check(&problem.inner).map_err(err)?;
    Ok((m.holds, m.residual))
}

#[pyfunction]
fn kclique_meanfield<'py>(py: Python<'py>, n: usize, k: usize, p: f64) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &be::kclique_meanfield(n, k, p).map_err(err)?)
}

#[pyfunction]
fn kclique_combinatorial<'py>(py: Python<'py>, n: usize, k: usize, p: f64) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &be::kclique_combinatorial(n, k, p).map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (n, k, p, seed = 0, trials = 1000))]
fn kclique_montecarlo<'py>(
    py: Python<'py>,
    n: usize,
    k: usize,
    p: f64,
    seed: u64,
    trials: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let r = py.detach(|| be::kclique_montecarlo(n, k, p, seed, trials)).map_err(err)?;
    to_py(py, &r)
}

#[pyfunction]
fn count_kcliques(n: usize, edges: Vec<(usize, usize)>, k: usize) -> PyResult<u64> {
    graph_tools::count_kcliques(&graph(n, edges)?, k).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (problem, grid = 101))]
fn gap_sweep<'py>(py: Python<'py>, problem: &PyProblem, grid: usize) -> PyResult<Bound<'py, PyAny>> {
    let profile = py.detach(|| gap_analysis::sweep(&problem.inner, grid)).map_err(err)?;
    to_py(py, &profile)
}

/// Final values and inequality-chain slacks of one evolution.
#[pyfunction]
#[pyo3(signature = (problem, total_time, schedule = "linear", steps = None))]
fn simulate<'py>(
    py: Python<'py>,
    problem: &PyProblem,
    total_time: f64,
    schedule: &str,
    steps: Option<usize>,
) -> PyResult<Bound<'py, PyAny>> {
    let s = Schedule::new(schedule_shape(schedule)?, total_time).map_err(err)?;
    let p = &problem.inner;
    let steps = steps.unwrap_or_else(|| dynamics::default_steps(p, &s));
    let (traj, chain) = py
        .detach(|| {
            let traj = dynamics::integrate(p, &s, steps)?;
            let chain = dynamics::verify_chain(&traj)?;
            Ok((traj, chain))
        })
        .map_err(err)?;
    let last = traj.last();
    let summary = serde_json::json!({
        "fidelity": last.fidelity,
        "overlapC": last.overlap_c,
        "bures": last.theta,
        "R": last.r,
        "normDrift": traj.norm_drift,
        "steps": traj.steps,
        "chain": chain,
        "csv": traj.to_csv(),
    });
    to_py(py, &summary)
}

#[pyfunction]
#[pyo3(signature = (problem, epsilon, schedule = "linear", rel_tol = 0.02))]
fn min_adiabatic_time<'py>(
    py: Python<'py>,
    problem: &PyProblem,
    epsilon: f64,
    schedule: &str,
    rel_tol: f64,
) -> PyResult<Bound<'py, PyAny>> {
    let shape = schedule_shape(schedule)?;
    let opts = MinTimeOptions {
        rel_tol,
        ..MinTimeOptions::default()
    };
    let r = py
        .detach(|| dynamics::min_adiabatic_time(&problem.inner, &shape, epsilon, &opts))
        .map_err(err)?;
    to_py(py, &r)
}

#[pymodule]
fn pyaqabound(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", aqabound::VERSION)?;
    m.add("PRNG_ID", aqabound::PRNG_ID)?;
    m.add("AqaboundError", m.py().get_type::<AqaboundError>())?;
    m.add_class::<PyProblem>()?;
    m.add_function(wrap_pyfunction!(compute_bound, m)?)?;
    m.add_function(wrap_pyfunction!(moments_check, m)?)?;
    m.add_function(wrap_pyfunction!(kclique_meanfield, m)?)?;
    m.add_function(wrap_pyfunction!(kclique_combinatorial, m)?)?;
    m.add_function(wrap_pyfunction!(kclique_montecarlo, m)?)?;
    m.add_function(wrap_pyfunction!(count_kcliques, m)?)?;
    m.add_function(wrap_pyfunction!(gap_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add_function(wrap_pyfunction!(min_adiabatic_time, m)?)?;
    Ok(())
}
