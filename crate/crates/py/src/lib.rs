use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use evpos::classifier::{self, ConeTestSet, Notion};
use evpos::harness::{self, AnalysisReport, ClassifyOptions, ModelInput, SuiteKind};
use evpos::lattice::{cone_distance, norm_value};
use evpos::{Error, LatticeVector, NormKind, OperatorModel};

fn py_err(e: Error) -> PyErr {
    match e {
        Error::NoConvergence { .. }
        | Error::SingularResolvent { .. }
        | Error::NotAnEigenvalue { .. }
        | Error::Extrapolation(_)
        | Error::PositiveVectorNotFound(_) => PyRuntimeError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn norm_from(name: &str) -> PyResult<NormKind> {
    match name {
        "ell1" => Ok(NormKind::Ell1),
        "ell2" => Ok(NormKind::Ell2),
        "ell_inf" => Ok(NormKind::EllInf),
        other => Err(PyValueError::new_err(format!("unknown norm `{other}` (use ell1, ell2, ell_inf)"))),
    }
}

/// Operator model built from a descriptor, matrix JSON or example name.
#[pyclass(name = "Operator", frozen)]
struct PyOperator {
    inner: OperatorModel,
}

#[pymethods]
impl PyOperator {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let d = harness::parse_model(text).map_err(py_err)?;
        Ok(Self { inner: d.build().map_err(py_err)? })
    }

    #[staticmethod]
    fn example(name: &str) -> PyResult<Self> {
        Ok(Self { inner: harness::build_example(name).map_err(py_err)? })
    }

    #[staticmethod]
    #[pyo3(signature = (rows, norm = "ell1"))]
    fn dense(rows: Vec<Vec<Complex64>>, norm: &str) -> PyResult<Self> {
        let m = evpos::CMatrix::from_rows(&rows).map_err(py_err)?;
        Ok(Self { inner: OperatorModel::dense(m, norm_from(norm)?).map_err(py_err)? })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn kind(&self) -> &'static str {
        self.inner.kind_name()
    }

    fn spectral_radius(&self) -> PyResult<f64> {
        classifier::model_spectral_radius(&self.inner).map_err(py_err)
    }

    fn power_apply(&self, n: u64, x: Vec<Complex64>) -> PyResult<Vec<Complex64>> {
        let v = LatticeVector::new(x, self.inner.norm_kind().clone()).map_err(py_err)?;
        Ok(self.inner.power_apply(n, &v).map_err(py_err)?.into_entries())
    }

    /// Status label per notion for the three eventual notions.
    #[pyo3(signature = (horizon = 30, tol = 1e-10, seed = 0))]
    fn eventual(&self, horizon: u64, tol: f64, seed: u64) -> PyResult<Vec<(String, String)>> {
        let t = &self.inner;
        let tests = ConeTestSet::canonical(t.norm_kind(), t.dim(), seed).map_err(py_err)?;
        let vs = [
            classifier::uniform_eventual(t, horizon, tol),
            classifier::individual_eventual(t, &tests, horizon, tol),
            classifier::weak_eventual(t, &tests, horizon, tol),
        ];
        vs.into_iter()
            .map(|v| v.map(|v| (v.notion.label().to_string(), v.status.label().to_string())).map_err(py_err))
            .collect()
    }

    /// `d+(T^n x)` and `|T^n x|` for `n = 0..=n_max`.
    fn orbit(&self, x: Vec<Complex64>, n_max: u64) -> PyResult<Vec<(u64, f64, f64)>> {
        let v = LatticeVector::new(x, self.inner.norm_kind().clone()).map_err(py_err)?;
        let rows = harness::orbit_decay(&self.inner, &v, n_max).map_err(py_err)?;
        Ok(rows.into_iter().map(|r| (r.n, r.d_plus, r.norm)).collect())
    }

    fn __repr__(&self) -> String {
        format!("Operator(kind={}, dim={})", self.inner.kind_name(), self.inner.dim())
    }
}

#[pyclass(name = "Report", frozen)]
struct PyReport {
    inner: AnalysisReport,
}

#[pymethods]
impl PyReport {
    #[getter]
    fn operator_id(&self) -> &str {
        &self.inner.operator_id
    }

    #[getter]
    fn contradictions(&self) -> usize {
        self.inner.contradictions
    }

    #[getter]
    fn exit_code(&self) -> i32 {
        self.inner.exit_code()
    }

    #[getter]
    fn errors(&self) -> Vec<String> {
        self.inner.errors.clone()
    }

    /// `(notion, status)` pairs in report order.
    fn statuses(&self) -> Vec<(String, String)> {
        self.inner.classification.iter().map(|v| (v.notion.label().to_string(), v.status.label().to_string())).collect()
    }

    fn status(&self, notion: &str) -> Option<String> {
        Notion::ALL
            .iter()
            .find(|n| n.label() == notion)
            .and_then(|n| self.inner.verdict(*n))
            .map(|v| v.status.label().to_string())
    }

    /// `(name, pass, applicable)` per check.
    fn checks(&self) -> Vec<(String, bool, bool)> {
        self.inner.checks.iter().map(|c| (c.name.clone(), c.pass, c.applicable)).collect()
    }

    fn to_json(&self) -> PyResult<String> {
        self.inner.to_json().map_err(py_err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self { inner: AnalysisReport::from_json(text).map_err(py_err)? })
    }
}

fn options(horizon: u64, tol: f64, seed: u64, checks: bool) -> ClassifyOptions {
    ClassifyOptions { eventual_horizon: horizon, tol, seed, checks, ..Default::default() }
}

#[pyfunction]
#[pyo3(signature = (name, horizon = 30, tol = 1e-10, seed = 0, checks = true))]
fn classify_example(name: &str, horizon: u64, tol: f64, seed: u64, checks: bool) -> PyResult<PyReport> {
    let r = harness::run_classify(&ModelInput::Example(name.into()), &options(horizon, tol, seed, checks));
    Ok(PyReport { inner: r.map_err(py_err)? })
}

#[pyfunction]
#[pyo3(signature = (text, horizon = 30, tol = 1e-10, seed = 0, checks = true))]
fn classify_json(text: &str, horizon: u64, tol: f64, seed: u64, checks: bool) -> PyResult<PyReport> {
    let descriptor = harness::parse_model(text).map_err(py_err)?;
    let input = ModelInput::Model { id: "python".into(), descriptor };
    Ok(PyReport { inner: harness::run_classify(&input, &options(horizon, tol, seed, checks)).map_err(py_err)? })
}

#[pyfunction]
#[pyo3(signature = (spec, horizon = 30, tol = 1e-10, seed = 0, checks = true))]
fn classify_generated(spec: &str, horizon: u64, tol: f64, seed: u64, checks: bool) -> PyResult<PyReport> {
    let input = ModelInput::Generate(harness::parse_generator(spec).map_err(py_err)?);
    Ok(PyReport { inner: harness::run_classify(&input, &options(horizon, tol, seed, checks)).map_err(py_err)? })
}

/// Matrix rows, `v`, `w` and the `n0` bound of a generated instance.
#[pyfunction]
#[allow(clippy::type_complexity)]
fn make_eventually_positive(
    dim: usize,
    gap: f64,
    seed: u64,
) -> PyResult<(Vec<Vec<Complex64>>, Vec<f64>, Vec<f64>, u64)> {
    let g = harness::make_eventually_positive(dim, gap, seed).map_err(py_err)?;
    let rows = (0..dim).map(|i| g.matrix.row(i).to_vec()).collect();
    Ok((rows, g.v, g.w, g.n0_bound))
}

/// `(failures, contradictions, solver failures, elapsed ms)`
#[pyfunction]
#[pyo3(signature = (name, seed = 0, trials = 100))]
fn run_suite(name: &str, seed: u64, trials: u64) -> PyResult<(Vec<String>, usize, usize, u128)> {
    let kind = match name {
        "properties" => SuiteKind::Properties,
        "catalog" => SuiteKind::Catalog,
        "random" => SuiteKind::Random,
        other => return Err(PyValueError::new_err(format!("unknown suite `{other}`"))),
    };
    let s = harness::run_suite(kind, seed, trials).map_err(py_err)?.summary;
    Ok((s.failures, s.contradictions, s.solver_failures, s.elapsed_ms))
}

/// `d+(x)` and `|x|` in the given norm.
#[pyfunction]
#[pyo3(signature = (x, norm = "ell1"))]
fn cone_distance_of(x: Vec<Complex64>, norm: &str) -> PyResult<(f64, f64)> {
    let v = LatticeVector::new(x, norm_from(norm)?).map_err(py_err)?;
    Ok((cone_distance(&v), norm_value(&v)))
}

#[pyfunction]
fn examples() -> Vec<&'static str> {
    harness::catalog_names()
}

#[pymodule]
fn evpos_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyOperator>()?;
    m.add_class::<PyReport>()?;
    m.add_function(wrap_pyfunction!(classify_example, m)?)?;
    m.add_function(wrap_pyfunction!(classify_json, m)?)?;
    m.add_function(wrap_pyfunction!(classify_generated, m)?)?;
    m.add_function(wrap_pyfunction!(make_eventually_positive, m)?)?;
    m.add_function(wrap_pyfunction!(run_suite, m)?)?;
    m.add_function(wrap_pyfunction!(cone_distance_of, m)?)?;
    m.add_function(wrap_pyfunction!(examples, m)?)?;
    m.add("__version__", harness::TOOL_VERSION)?;
    Ok(())
}
