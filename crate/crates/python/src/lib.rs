//! Python bindings. Reports cross the boundary as JSON strings.

use std::sync::Arc;

use mingraph_core::geometry::{extract_zero_set, graph_area as core_graph_area, LevelSet};
use mingraph_core::grid::{ck_norm, DiskGrid, ScalarField};
use mingraph_core::harmonic::{self, CurveSpec, FitOptions, HarmonicSeed};
use mingraph_core::msolver::{self, picard_run, PicardConfig};
use mingraph_core::Error;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::ContractionFailure { .. }
        | Error::NonFinite { .. }
        | Error::IllConditionedFit { .. }
        | Error::SolverStall { .. }
        | Error::DegenerateLevelSet { .. } => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn json<T: serde::Serialize>(value: &T) -> PyResult<String> {
    serde_json::to_string(value).map_err(|e| PyRuntimeError::new_err(e.to_string()))
}

/// Cut-cell grid on the closed unit disk.
#[pyclass(frozen, name = "Grid")]
struct PyGrid(Arc<DiskGrid>);

#[pymethods]
impl PyGrid {
    #[new]
    fn new(h: f64) -> PyResult<Self> {
        Ok(PyGrid(Arc::new(DiskGrid::new(h).map_err(to_py)?)))
    }

    #[getter]
    fn h(&self) -> f64 {
        self.0.h()
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    /// Node coordinates in field order.
    fn nodes(&self) -> Vec<(f64, f64)> {
        self.0.nodes().iter().map(|n| (n.x, n.y)).collect()
    }

    fn __repr__(&self) -> String {
        format!("Grid(h={}, nodes={})", self.0.h(), self.0.len())
    }
}

/// Node values on a grid.
#[pyclass(frozen, name = "Field")]
struct PyField(ScalarField);

#[pymethods]
impl PyField {
    #[new]
    fn new(grid: &PyGrid, values: Vec<f64>) -> PyResult<Self> {
        Ok(PyField(ScalarField::new(grid.0.clone(), values, None).map_err(to_py)?))
    }

    fn values(&self) -> Vec<f64> {
        self.0.values().to_vec()
    }

    fn sup_norm(&self) -> f64 {
        self.0.sup_norm()
    }

    /// Discrete C^k norm, k in 0..=2.
    fn ck_norm(&self, k: usize) -> PyResult<f64> {
        ck_norm(&self.0, k).map_err(to_py)
    }

    fn scale(&self, c: f64) -> PyField {
        PyField(self.0.scale(c))
    }

    fn grid(&self) -> PyGrid {
        PyGrid(self.0.grid().clone())
    }

    fn __len__(&self) -> usize {
        self.0.values().len()
    }
}

/// A harmonic function on the disk.
#[pyclass(frozen, name = "Seed")]
struct PySeed(HarmonicSeed);

#[pymethods]
impl PySeed {
    /// `sin(k x) cosh(k y)`.
    #[staticmethod]
    fn stripe(k: f64) -> PyResult<Self> {
        let s = HarmonicSeed::StripeSinCosh { k };
        s.validate().map_err(to_py)?;
        Ok(PySeed(s))
    }

    /// `Re((x + i y)^m)`.
    #[staticmethod]
    fn rezm(m: u32) -> PyResult<Self> {
        let s = HarmonicSeed::HarmonicPolynomialReZm { m };
        s.validate().map_err(to_py)?;
        Ok(PySeed(s))
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let s: HarmonicSeed = serde_json::from_str(text).map_err(|e| PyValueError::new_err(e.to_string()))?;
        s.validate().map_err(to_py)?;
        Ok(PySeed(s))
    }

    fn to_json(&self) -> PyResult<String> {
        json(&self.0)
    }

    fn value(&self, x: f64, y: f64) -> f64 {
        self.0.value(x, y)
    }

    fn sample(&self, grid: &PyGrid) -> PyResult<PyField> {
        Ok(PyField(harmonic::sample(&self.0, &grid.0).map_err(to_py)?))
    }

    fn predicted_nodal_length(&self) -> Option<f64> {
        self.0.predicted_nodal_length()
    }
}

/// Zero set of a field as polylines.
#[pyclass(frozen, name = "LevelSet")]
struct PyLevelSet(LevelSet);

#[pymethods]
impl PyLevelSet {
    #[getter]
    fn total_length(&self) -> f64 {
        self.0.total_length
    }

    #[getter]
    fn min_gradient(&self) -> Option<f64> {
        self.0.min_gradient
    }

    fn polylines(&self) -> Vec<Vec<(f64, f64)>> {
        self.0.polylines.iter().map(|p| p.points.iter().map(|q| (q[0], q[1])).collect()).collect()
    }

    fn __len__(&self) -> usize {
        self.0.polylines.len()
    }
}

/// Result of a Picard run.
#[pyclass(frozen, name = "PicardResult")]
struct PyPicardResult {
    #[pyo3(get)]
    u: Py<PyField>,
    #[pyo3(get)]
    lambda_: f64,
    #[pyo3(get)]
    converged: bool,
    #[pyo3(get)]
    report_json: String,
}

/// Promotes `v` to a discrete minimal graph `u`, with `lambda u ≈ v`. A run that
/// fails to contract returns with `converged` false and the reason in the report.
#[pyfunction]
#[pyo3(signature = (v, epsilon = 0.05, stop_tol = 1e-12, max_iters = 100, poisson_tol = 1e-10))]
fn picard(py: Python<'_>, v: &PyField, epsilon: f64, stop_tol: f64, max_iters: usize, poisson_tol: f64) -> PyResult<PyPicardResult> {
    let cfg = PicardConfig { epsilon, stop_tol, max_iters, poisson_tol };
    let run = py.detach(|| picard_run(&v.0, &cfg)).map_err(to_py)?;
    Ok(PyPicardResult {
        converged: run.report.converged,
        report_json: json(&run.report)?,
        lambda_: run.lambda,
        u: Py::new(py, PyField(run.u))?,
    })
}

#[pyfunction]
fn zero_set(u: &PyField) -> PyResult<PyLevelSet> {
    Ok(PyLevelSet(extract_zero_set(&u.0).map_err(to_py)?))
}

#[pyfunction]
fn graph_area(u: &PyField) -> f64 {
    core_graph_area(&u.0)
}

#[pyfunction]
fn nonlinearity(u: &PyField) -> PyResult<PyField> {
    Ok(PyField(msolver::nonlinearity_f(&u.0).map_err(to_py)?))
}

#[pyfunction]
fn ms_residual(u: &PyField) -> PyResult<PyField> {
    Ok(PyField(msolver::ms_residual(&u.0).map_err(to_py)?))
}

/// Fits a harmonic polynomial to the Cauchy data of a curve (built-in name or file).
/// Returns the seed and the fit report as JSON.
#[pyfunction]
fn fit_curve(curve: &str, degree: usize) -> PyResult<(PySeed, String)> {
    let spec = CurveSpec::load(curve).map_err(to_py)?;
    spec.check_injective().map_err(to_py)?;
    let (seed, report) = harmonic::fit_cauchy_data(&spec, degree, &FitOptions::default()).map_err(to_py)?;
    Ok((PySeed(seed), json(&report)?))
}

#[pyfunction]
fn predicted_nodal_length(k: f64) -> f64 {
    harmonic::predicted_nodal_length(k)
}

#[pymodule]
fn mingraph(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGrid>()?;
    m.add_class::<PyField>()?;
    m.add_class::<PySeed>()?;
    m.add_class::<PyLevelSet>()?;
    m.add_class::<PyPicardResult>()?;
    m.add_function(wrap_pyfunction!(picard, m)?)?;
    m.add_function(wrap_pyfunction!(zero_set, m)?)?;
    m.add_function(wrap_pyfunction!(graph_area, m)?)?;
    m.add_function(wrap_pyfunction!(nonlinearity, m)?)?;
    m.add_function(wrap_pyfunction!(ms_residual, m)?)?;
    m.add_function(wrap_pyfunction!(fit_curve, m)?)?;
    m.add_function(wrap_pyfunction!(predicted_nodal_length, m)?)?;
    Ok(())
}
