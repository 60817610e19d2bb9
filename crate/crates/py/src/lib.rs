//! Python bindings: dataset loading/generation, fold planning, metrics, the
//! hydraulic baselines, classical regressors, and the full experiment run.

use std::collections::HashMap;
use std::path::PathBuf;

use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use weirflow_core::classical::{fit_default, ClassicalKind, Regressor};
use weirflow_core::data;
use weirflow_core::data::{Dataset, SyntheticMode};
use weirflow_core::experiment::{
    self, DataSource, ExperimentConfig, HybridStrategy, ModelKind,
};
use weirflow_core::hydraulics;
use weirflow_core::metrics::{self, MetricKind};
use weirflow_core::resampling;
use weirflow_core::Error;

fn to_py_err(e: Error) -> PyErr {
    match e {
        Error::Io { .. } => PyIOError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

/// A validated dataset of weir samples.
#[pyclass(name = "Dataset")]
#[derive(Clone)]
struct PyDataset {
    inner: Dataset,
}

#[pymethods]
impl PyDataset {
    /// Loads the fixed-schema CSV (`lambda,beta,L,W,Q,Y1,Y2,Y3,h1,Cd`).
    #[staticmethod]
    fn load_csv(path: PathBuf) -> PyResult<Self> {
        Ok(PyDataset {
            inner: data::load_csv(path).map_err(to_py_err)?,
        })
    }

    /// Generates a synthetic dataset; identical arguments reproduce it.
    #[staticmethod]
    #[pyo3(signature = (n, mode="bagheri", noise_sd=0.0, seed=0))]
    fn generate(n: usize, mode: &str, noise_sd: f64, seed: u64) -> PyResult<Self> {
        let mode = SyntheticMode::parse(mode).map_err(to_py_err)?;
        Ok(PyDataset {
            inner: data::generate_synthetic(n, mode, noise_sd, seed).map_err(to_py_err)?,
        })
    }

    fn save_csv(&self, path: PathBuf) -> PyResult<()> {
        data::write_csv(&self.inner, path).map_err(to_py_err)
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    /// Feature rows in header order (without the target).
    fn features(&self) -> Vec<Vec<f64>> {
        self.inner.feature_matrix()
    }

    /// Discharge-coefficient targets.
    fn targets(&self) -> PyResult<Vec<f64>> {
        self.inner.targets().map_err(to_py_err)
    }

    fn __repr__(&self) -> String {
        format!("Dataset(n={})", self.inner.len())
    }
}

/// A fitted classical regressor (`lr`, `rf`, `svm`, `knn`, or `dt`).
#[pyclass(name = "Regressor")]
struct PyRegressor {
    inner: Regressor,
    kind: ClassicalKind,
}

#[pymethods]
impl PyRegressor {
    #[staticmethod]
    #[pyo3(signature = (kind, x, y, seed=0))]
    fn fit(kind: &str, x: Vec<Vec<f64>>, y: Vec<f64>, seed: u64) -> PyResult<Self> {
        let kind = ClassicalKind::parse(kind).map_err(to_py_err)?;
        Ok(PyRegressor {
            inner: fit_default(kind, &x, &y, seed).map_err(to_py_err)?,
            kind,
        })
    }

    fn predict(&self, x: Vec<Vec<f64>>) -> PyResult<Vec<f64>> {
        self.inner.predict(&x).map_err(to_py_err)
    }

    fn __repr__(&self) -> String {
        format!("Regressor(kind='{}')", self.kind.token())
    }
}

/// Deterministic k-fold assignment: fold index per sample.
#[pyfunction]
fn make_folds(n: usize, k: usize, seed: u64) -> PyResult<Vec<usize>> {
    Ok(resampling::make_folds(n, k, seed)
        .map_err(to_py_err)?
        .assignments)
}

/// One error metric (`mse`, `rmse`, `mae`, `mape`, `msle`, `rmsle`, `mpd`,
/// `mgd`) over paired vectors.
#[pyfunction]
fn compute_metric(kind: &str, y: Vec<f64>, yhat: Vec<f64>) -> PyResult<f64> {
    let kind = MetricKind::parse(kind).map_err(to_py_err)?;
    metrics::compute_metric(kind, &y, &yhat).map_err(to_py_err)
}

/// All eight metrics plus their base-10 logs and the clamp count.
#[pyfunction]
fn compute_report<'py>(
    py: Python<'py>,
    y: Vec<f64>,
    yhat: Vec<f64>,
) -> PyResult<Bound<'py, PyDict>> {
    let report = metrics::compute_report(&y, &yhat).map_err(to_py_err)?;
    let logs = metrics::log_report(&report);
    let out = PyDict::new(py);
    for (kind, log) in MetricKind::ALL.iter().zip(logs) {
        out.set_item(kind.name(), report.value(*kind))?;
        out.set_item(format!("log10_{}", kind.name()), log)?;
    }
    out.set_item("clamped_count", report.clamped_count)?;
    Ok(out)
}

#[pyfunction]
#[pyo3(signature = (h1, v, g=hydraulics::G_DEFAULT))]
fn total_head(h1: f64, v: f64, g: f64) -> PyResult<f64> {
    hydraulics::total_head(h1, v, g).map_err(to_py_err)
}

#[pyfunction]
#[pyo3(signature = (cd, b, h1, g=hydraulics::G_DEFAULT))]
fn discharge_from_cd(cd: f64, b: f64, h1: f64, g: f64) -> PyResult<f64> {
    hydraulics::discharge_from_cd(cd, b, h1, g).map_err(to_py_err)
}

#[pyfunction]
#[pyo3(signature = (q, b, h1, g=hydraulics::G_DEFAULT))]
fn cd_from_discharge(q: f64, b: f64, h1: f64, g: f64) -> PyResult<f64> {
    hydraulics::cd_from_discharge(q, b, h1, g).map_err(to_py_err)
}

#[pyfunction]
fn cd_bagheri(lambda: f64, h1: f64, l: f64, w: f64) -> PyResult<f64> {
    hydraulics::cd_bagheri(lambda, h1, l, w).map_err(to_py_err)
}

#[pyfunction]
#[pyo3(signature = (q, b, w, g=hydraulics::G_DEFAULT))]
fn stage_variable_a(q: f64, b: f64, w: f64, g: f64) -> PyResult<f64> {
    hydraulics::stage_variable_a(q, b, w, g).map_err(to_py_err)
}

#[pyfunction]
fn stage_discharge_a(h1: f64, w: f64, l: f64, w1: f64) -> PyResult<f64> {
    hydraulics::stage_discharge_a(h1, w, l, w1).map_err(to_py_err)
}

#[pyfunction]
fn cd_carollo(h1: f64, w: f64, l: f64, w1: f64) -> PyResult<f64> {
    hydraulics::cd_carollo(h1, w, l, w1).map_err(to_py_err)
}

#[pyfunction]
fn stage_coefficient_a(cd: f64) -> PyResult<f64> {
    hydraulics::stage_coefficient_a(cd).map_err(to_py_err)
}

/// Cross-validated comparison run over a dataset.
///
/// Returns `{model: {"oof": [...], "seconds": s, "metrics": {...},
/// "fold_metrics": [...]}}` plus `"_failures"` when models failed. When
/// `out_dir` is given the CSV reports are written there too.
#[pyfunction]
#[pyo3(signature = (dataset, models, folds=5, seed=0, epochs=None, hybrid="average", out_dir=None))]
#[allow(clippy::too_many_arguments)]
fn run_experiment<'py>(
    py: Python<'py>,
    dataset: &PyDataset,
    models: Vec<String>,
    folds: usize,
    seed: u64,
    epochs: Option<usize>,
    hybrid: &str,
    out_dir: Option<PathBuf>,
) -> PyResult<Bound<'py, PyDict>> {
    let models = models
        .iter()
        .map(|t| ModelKind::parse(t))
        .collect::<weirflow_core::Result<Vec<_>>>()
        .map_err(to_py_err)?;
    let config = ExperimentConfig {
        seed,
        folds,
        models,
        hybrid_strategy: HybridStrategy::parse(hybrid).map_err(to_py_err)?,
        epochs,
        data: DataSource::Synthetic {
            // placeholder; the dataset comes in directly
            n: dataset.inner.len(),
            mode: SyntheticMode::Bagheri,
            noise_sd: 0.0,
        },
        out_dir: out_dir.clone(),
        single_thread: true,
        emit_insample: false,
    };
    let result = experiment::run_experiment(&config, &dataset.inner).map_err(to_py_err)?;
    if let Some(dir) = &out_dir {
        experiment::emit_reports(&result, dir).map_err(to_py_err)?;
    }

    let out = PyDict::new(py);
    for run in &result.models {
        let entry = PyDict::new(py);
        entry.set_item("oof", run.oof.clone())?;
        entry.set_item("seconds", run.train_seconds)?;
        let pooled = PyDict::new(py);
        for kind in MetricKind::ALL {
            pooled.set_item(kind.name(), run.pooled.value(kind))?;
        }
        entry.set_item("metrics", pooled)?;
        let per_fold: Vec<HashMap<&str, f64>> = run
            .per_fold
            .iter()
            .map(|r| {
                MetricKind::ALL
                    .iter()
                    .map(|k| (k.name(), r.value(*k)))
                    .collect()
            })
            .collect();
        entry.set_item("fold_metrics", per_fold)?;
        out.set_item(run.model.token(), entry)?;
    }
    if !result.failures.is_empty() {
        let failures: Vec<(String, String)> = result
            .failures
            .iter()
            .map(|(m, d)| (m.token().to_string(), d.clone()))
            .collect();
        out.set_item("_failures", failures)?;
    }
    Ok(out)
}

#[pymodule]
fn weirflow(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDataset>()?;
    m.add_class::<PyRegressor>()?;
    m.add_function(wrap_pyfunction!(make_folds, m)?)?;
    m.add_function(wrap_pyfunction!(compute_metric, m)?)?;
    m.add_function(wrap_pyfunction!(compute_report, m)?)?;
    m.add_function(wrap_pyfunction!(total_head, m)?)?;
    m.add_function(wrap_pyfunction!(discharge_from_cd, m)?)?;
    m.add_function(wrap_pyfunction!(cd_from_discharge, m)?)?;
    m.add_function(wrap_pyfunction!(cd_bagheri, m)?)?;
    m.add_function(wrap_pyfunction!(stage_variable_a, m)?)?;
    m.add_function(wrap_pyfunction!(stage_discharge_a, m)?)?;
    m.add_function(wrap_pyfunction!(cd_carollo, m)?)?;
    m.add_function(wrap_pyfunction!(stage_coefficient_a, m)?)?;
    m.add_function(wrap_pyfunction!(run_experiment, m)?)?;
    Ok(())
}
