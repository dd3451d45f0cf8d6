//! Python bindings. Probabilities cross the boundary as "p/q" strings, which
//! `fractions.Fraction` accepts directly.

use std::collections::BTreeMap;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use cfq_core::classical::SampleLog;
use cfq_core::identify::BoundsJson;
use cfq_core::io;
use cfq_core::quantum::{self, Amplitudes};
use cfq_core::reproduce::{reproduce as run_example, Example};
use cfq_core::{rational, toy, ConstraintLevel, CounterfactualQuery, Evidence, FunctionTable, LinearTarget};

fn err(e: cfq_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A distribution p(F) over function tables [n_x] → [n_y].
#[pyclass(name = "FunctionDistribution", module = "cfq", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyDistribution(cfq_core::FunctionDistribution);

#[pymethods]
impl PyDistribution {
    /// `weights` maps output strings such as "01" to rationals such as "1/2".
    #[new]
    fn new(n_x: usize, n_y: usize, weights: BTreeMap<String, String>) -> PyResult<Self> {
        let w = weights
            .iter()
            .map(|(k, v)| Ok((FunctionTable::from_key(n_y, k)?, rational::parse(v)?)))
            .collect::<cfq_core::Result<Vec<_>>>()
            .map_err(err)?;
        cfq_core::FunctionDistribution::new(n_x, n_y, w).map(Self).map_err(err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self(io::parse_model(text).map_err(err)?.response_distribution()))
    }

    #[staticmethod]
    fn load(path: std::path::PathBuf) -> PyResult<Self> {
        Ok(Self(io::load_model(&path).map_err(err)?.response_distribution()))
    }

    #[staticmethod]
    fn uniform(n_x: usize, n_y: usize) -> PyResult<Self> {
        cfq_core::FunctionDistribution::uniform(n_x, n_y).map(Self).map_err(err)
    }

    fn to_json(&self) -> String {
        io::model_to_json(&self.0)
    }

    #[getter]
    fn n_x(&self) -> usize {
        self.0.n_x()
    }

    #[getter]
    fn n_y(&self) -> usize {
        self.0.n_y()
    }

    fn weights(&self) -> BTreeMap<String, String> {
        io::weights_map(&self.0)
    }

    /// p(Y_x = y) for each y.
    fn conditional(&self, x: usize) -> PyResult<Vec<String>> {
        Ok(self.0.conditional(x).map_err(err)?.iter().map(rational::format).collect())
    }

    /// Joint counterfactual for a query like "0:1,1:0".
    fn joint(&self, query: &str) -> PyResult<String> {
        let q = CounterfactualQuery::parse(query).map_err(err)?;
        Ok(rational::format(&self.0.joint(&q).map_err(err)?))
    }

    /// p(Y_{x_cf} = y_cf | X = x_obs, Y = y_obs).
    fn conditional_counterfactual(&self, x_obs: usize, y_obs: usize, x_cf: usize, y_cf: usize) -> PyResult<String> {
        let v = self.0.conditional_counterfactual(&Evidence::new(x_obs, y_obs), x_cf, y_cf).map_err(err)?;
        Ok(rational::format(&v))
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.0 == other.0
    }

    fn __repr__(&self) -> String {
        let body = self.weights().iter().map(|(k, v)| format!("'{k}': '{v}'")).collect::<Vec<_>>().join(", ");
        format!("FunctionDistribution({}, {}, {{{body}}})", self.0.n_x(), self.0.n_y())
    }
}

/// LP bounds on a joint counterfactual given the constraints `model` induces.
#[pyfunction]
#[pyo3(signature = (model, target, level = "one-way"))]
fn bounds<'py>(py: Python<'py>, model: &PyDistribution, target: &str, level: &str) -> PyResult<Bound<'py, PyDict>> {
    let p = &model.0;
    let level = ConstraintLevel::parse(level).map_err(err)?;
    let q = CounterfactualQuery::parse(target).map_err(err)?;
    let t = LinearTarget::joint(p.n_x(), p.n_y(), &q).map_err(err)?;
    let sys = cfq_core::build_constraints(p, &level).map_err(err)?;
    let id = cfq_core::is_identifiable(&t, &sys).map_err(err)?;
    let b = BoundsJson::from(&id);
    let d = PyDict::new(py);
    d.set_item("lo", b.lo)?;
    d.set_item("hi", b.hi)?;
    d.set_item("identifiable", b.identifiable)?;
    d.set_item("witness_lo", b.witness_lo)?;
    d.set_item("witness_hi", b.witness_hi)?;
    Ok(d)
}

/// Classical oracle log as (x_in, x_out, y_out) with x cycling through 0..n_x.
#[pyfunction]
#[pyo3(signature = (model, queries, seed = 0))]
fn simulate(model: &PyDistribution, queries: usize, seed: u64) -> PyResult<Vec<(usize, usize, usize)>> {
    let log = SampleLog::round_robin(&model.0, queries, seed).map_err(err)?;
    Ok(log.records.iter().map(|r| (r.x_in, r.x_out, r.y_out)).collect())
}

type Matrix = Vec<Vec<f64>>;

/// ρ_XY after one oracle query, as (real, imaginary) nested lists.
#[pyfunction]
#[pyo3(signature = (model, alpha = None))]
fn rho_xy(model: &PyDistribution, alpha: Option<Vec<f64>>) -> PyResult<(Matrix, Matrix)> {
    let alpha = amplitudes(&model.0, alpha)?;
    let rho = quantum::build_rho_xy(&model.0, &alpha).map_err(err)?.to_json();
    Ok((rho.re, rho.im))
}

/// Rows (x, x', y, y', p(f(x)=y, f(x')=y')) read off ρ_XY.
#[pyfunction]
#[pyo3(signature = (model, alpha = None))]
fn tomography(model: &PyDistribution, alpha: Option<Vec<f64>>) -> PyResult<Vec<quantum::TomographyRow>> {
    let alpha = amplitudes(&model.0, alpha)?;
    let rho = quantum::build_rho_xy(&model.0, &alpha).map_err(err)?;
    quantum::tomography_table(&rho, &alpha).map_err(err)
}

fn amplitudes(p: &cfq_core::FunctionDistribution, alpha: Option<Vec<f64>>) -> PyResult<Amplitudes> {
    match alpha {
        Some(a) => Amplitudes::from_real(&a).map_err(err),
        None => Ok(Amplitudes::uniform(p.n_x())),
    }
}

/// (p(Y=0|do 0), p(Y=0|do 1), p(Φ⁺|do +)) for a binary model.
#[pyfunction]
fn binary_measurements(model: &PyDistribution) -> PyResult<(f64, f64, f64)> {
    quantum::binary_measurements(&model.0).map_err(err)
}

/// Invert the three binary measurements back to p(F).
#[pyfunction]
fn solve_binary_pf(c00: f64, c01: f64, bell: f64) -> PyResult<PyDistribution> {
    quantum::solve_binary_pf(c00, c01, bell).map(PyDistribution).map_err(err)
}

/// Run a scripted example; returns {"name", "passed", "claims": [...]}.
#[pyfunction]
fn reproduce<'py>(py: Python<'py>, example: &str) -> PyResult<Bound<'py, PyDict>> {
    let report = run_example(example.parse::<Example>().map_err(err)?).map_err(err)?;
    let claims = report
        .claims
        .iter()
        .map(|c| {
            let d = PyDict::new(py);
            d.set_item("description", &c.description)?;
            d.set_item("expected", &c.expected)?;
            d.set_item("computed", &c.computed)?;
            d.set_item("pass", c.pass)?;
            Ok(d)
        })
        .collect::<PyResult<Vec<_>>>()?;
    let d = PyDict::new(py);
    d.set_item("name", &report.name)?;
    d.set_item("passed", report.passed())?;
    d.set_item("claims", claims)?;
    Ok(d)
}

/// Quantum vs toy-theory probabilities on the binary test grid.
#[pyfunction]
fn toy_check<'py>(py: Python<'py>) -> PyResult<Vec<Bound<'py, PyDict>>> {
    toy::compare_binary_equivalence()
        .map_err(err)?
        .into_iter()
        .map(|row| {
            let d = PyDict::new(py);
            d.set_item("scenario", row.scenario)?;
            d.set_item("pF", row.p_f)?;
            d.set_item("quantum", row.quantum)?;
            d.set_item("toy", row.toy)?;
            d.set_item("equal", row.equal)?;
            Ok(d)
        })
        .collect()
}

#[pymodule]
fn cfq(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDistribution>()?;
    m.add_function(wrap_pyfunction!(bounds, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add_function(wrap_pyfunction!(rho_xy, m)?)?;
    m.add_function(wrap_pyfunction!(tomography, m)?)?;
    m.add_function(wrap_pyfunction!(binary_measurements, m)?)?;
    m.add_function(wrap_pyfunction!(solve_binary_pf, m)?)?;
    m.add_function(wrap_pyfunction!(reproduce, m)?)?;
    m.add_function(wrap_pyfunction!(toy_check, m)?)?;
    Ok(())
}
