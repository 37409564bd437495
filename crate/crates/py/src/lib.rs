//! Python bindings: records, SDOF responses, spectra, the back-propagation
//! network and the experiment runner.

use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::{Path, PathBuf};

use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use quake_core::ann::{self, TrainerConfig, TrainingPair};
use quake_core::io::{self as qio, SyntheticKind, SyntheticParams};
use quake_core::pipeline;
use quake_core::sdof::{self, DampedFrequency, DampingSpec};

fn to_py(e: quake_core::Error) -> PyErr {
    match e {
        quake_core::Error::Io(io) => PyIOError::new_err(io.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn parse<T: std::str::FromStr<Err = quake_core::Error>>(s: &str) -> PyResult<T> {
    s.parse().map_err(to_py)
}

#[pyclass(name = "GroundMotionRecord", module = "quake", skip_from_py_object)]
struct PyRecord {
    inner: sdof::GroundMotionRecord,
}

#[pymethods]
impl PyRecord {
    #[new]
    #[pyo3(signature = (dt, samples, label = "record"))]
    fn new(dt: f64, samples: Vec<f64>, label: &str) -> PyResult<Self> {
        let inner = sdof::GroundMotionRecord::new(dt, samples, label).map_err(to_py)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn load(path: PathBuf) -> PyResult<Self> {
        let inner = qio::read_record_file(&path).map_err(to_py)?;
        Ok(Self { inner })
    }

    fn save(&self, path: PathBuf) -> PyResult<()> {
        let file = File::create(&path)?;
        qio::write_record(&self.inner, BufWriter::new(file)).map_err(to_py)
    }

    #[getter]
    fn dt(&self) -> f64 {
        self.inner.dt()
    }

    #[getter]
    fn samples(&self) -> Vec<f64> {
        self.inner.samples().to_vec()
    }

    #[getter]
    fn label(&self) -> String {
        self.inner.label().to_string()
    }

    #[getter]
    fn peak(&self) -> f64 {
        self.inner.peak()
    }

    fn times(&self) -> Vec<f64> {
        (0..self.inner.len()).map(|n| self.inner.time(n)).collect()
    }

    fn scaled(&self, factor: f64) -> PyResult<Self> {
        let inner = sdof::scale_record(&self.inner, factor).map_err(to_py)?;
        Ok(Self { inner })
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "GroundMotionRecord(label={:?}, dt={}, len={})",
            self.inner.label(),
            self.inner.dt(),
            self.inner.len()
        )
    }
}

#[pyclass(name = "SdofSystem", module = "quake", skip_from_py_object)]
struct PySystem {
    inner: sdof::SdofSystem,
}

#[pymethods]
impl PySystem {
    #[new]
    #[pyo3(signature = (omega, damping_rate = 0.0, kernel = "literal"))]
    fn new(omega: f64, damping_rate: f64, kernel: &str) -> PyResult<Self> {
        let kernel: DampedFrequency = parse(kernel)?;
        let inner = sdof::SdofSystem::new(omega, damping_rate)
            .and_then(|s| s.with_kernel(kernel))
            .map_err(to_py)?;
        Ok(Self { inner })
    }

    /// `damping` is `ratio:<ξ>` or `rate:<c>`.
    #[staticmethod]
    #[pyo3(signature = (period, damping = "ratio:0.05"))]
    fn from_period(period: f64, damping: &str) -> PyResult<Self> {
        let spec: DampingSpec = parse(damping)?;
        let inner = sdof::SdofSystem::from_period(period, spec).map_err(to_py)?;
        Ok(Self { inner })
    }

    #[getter]
    fn omega(&self) -> f64 {
        self.inner.omega()
    }

    #[getter]
    fn damping_rate(&self) -> f64 {
        self.inner.damping_rate()
    }

    #[getter]
    fn damping_ratio(&self) -> f64 {
        self.inner.damping_ratio()
    }

    #[getter]
    fn period(&self) -> f64 {
        self.inner.period()
    }

    fn __repr__(&self) -> String {
        format!(
            "SdofSystem(omega={}, damping_rate={}, kernel={})",
            self.inner.omega(),
            self.inner.damping_rate(),
            self.inner.kernel()
        )
    }
}

#[pyfunction]
fn respond_undamped(record: &PyRecord, omega: f64) -> PyResult<Vec<f64>> {
    sdof::respond_undamped(&record.inner, omega)
        .map(|h| h.into_values())
        .map_err(to_py)
}

#[pyfunction]
fn respond_damped(record: &PyRecord, system: &PySystem) -> PyResult<Vec<f64>> {
    sdof::respond_damped(&record.inner, &system.inner)
        .map(|h| h.into_values())
        .map_err(to_py)
}

#[pyfunction]
fn respond_damped_incremental(record: &PyRecord, system: &PySystem) -> PyResult<Vec<f64>> {
    sdof::respond_damped_incremental(&record.inner, &system.inner)
        .map(|h| h.into_values())
        .map_err(to_py)
}

#[pyfunction]
fn period_sweep(start: f64, stop: f64, step: f64) -> PyResult<Vec<f64>> {
    sdof::period_sweep(start, stop, step).map_err(to_py)
}

/// Returns `(periods, peaks)`.
#[pyfunction]
#[pyo3(signature = (record, periods, damping = "ratio:0.05", kernel = "literal"))]
fn response_spectrum(
    record: &PyRecord,
    periods: Vec<f64>,
    damping: &str,
    kernel: &str,
) -> PyResult<(Vec<f64>, Vec<f64>)> {
    let spec: DampingSpec = parse(damping)?;
    let kernel: DampedFrequency = parse(kernel)?;
    let s = sdof::response_spectrum_with_kernel(&record.inner, &periods, spec, kernel)
        .map_err(to_py)?;
    Ok((s.periods().to_vec(), s.peaks().to_vec()))
}

#[pyfunction]
#[pyo3(signature = (
    kind = "sine", seed = 0, duration = 14.92, dt = 0.02, peak = 0.16885,
    freq = 3.0, f0 = 1.0, f1 = 5.0, components = 64
))]
#[allow(clippy::too_many_arguments)]
fn generate_synthetic(
    kind: &str,
    seed: u64,
    duration: f64,
    dt: f64,
    peak: f64,
    freq: f64,
    f0: f64,
    f1: f64,
    components: usize,
) -> PyResult<PyRecord> {
    let kind: SyntheticKind = parse(kind)?;
    let params = SyntheticParams { duration, dt, peak, freq, f0, f1, components };
    let inner = qio::generate_synthetic(kind, &params, seed).map_err(to_py)?;
    Ok(PyRecord { inner })
}

#[pyclass(name = "MlpNetwork", module = "quake", skip_from_py_object)]
struct PyNetwork {
    inner: ann::MlpNetwork,
}

fn pairs_from(pairs: Vec<(Vec<f64>, Vec<f64>)>) -> PyResult<Vec<TrainingPair>> {
    pairs
        .into_iter()
        .map(|(z, d)| TrainingPair::new(z, d).map_err(to_py))
        .collect()
}

#[pymethods]
impl PyNetwork {
    #[new]
    #[pyo3(signature = (input_size, hidden_size, output_size, init_range = 0.5, seed = 0))]
    fn new(
        input_size: usize,
        hidden_size: usize,
        output_size: usize,
        init_range: f64,
        seed: u64,
    ) -> PyResult<Self> {
        let inner = ann::MlpNetwork::seeded(input_size, hidden_size, output_size, init_range, seed)
            .map_err(to_py)?;
        Ok(Self { inner })
    }

    /// Builds a network from row-major `v` (J×I) and `w` (K×J).
    #[staticmethod]
    fn from_weights(
        input_size: usize,
        hidden_size: usize,
        output_size: usize,
        v: Vec<f64>,
        w: Vec<f64>,
    ) -> PyResult<Self> {
        let inner = ann::MlpNetwork::from_weights(input_size, hidden_size, output_size, v, w)
            .map_err(to_py)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn load(path: PathBuf) -> PyResult<Self> {
        let (inner, _) = ann::load_model(BufReader::new(File::open(&path)?)).map_err(to_py)?;
        Ok(Self { inner })
    }

    fn save(&self, path: PathBuf) -> PyResult<()> {
        let file = File::create(&path)?;
        ann::save_weights(&self.inner, BufWriter::new(file)).map_err(to_py)
    }

    #[getter]
    fn shape(&self) -> (usize, usize, usize) {
        (self.inner.input_size(), self.inner.hidden_size(), self.inner.output_size())
    }

    #[getter]
    fn hidden_weights(&self) -> Vec<f64> {
        self.inner.hidden_weights().to_vec()
    }

    #[getter]
    fn output_weights(&self) -> Vec<f64> {
        self.inner.output_weights().to_vec()
    }

    /// Returns `(hidden, output)` activations.
    fn forward(&self, z: Vec<f64>) -> PyResult<(Vec<f64>, Vec<f64>)> {
        let act = self.inner.forward(&z).map_err(to_py)?;
        Ok((act.hidden, act.output))
    }

    fn predict(&self, z: Vec<f64>) -> PyResult<Vec<f64>> {
        self.inner.predict(&z).map_err(to_py)
    }

    fn cumulative_error(&self, pairs: Vec<(Vec<f64>, Vec<f64>)>) -> PyResult<f64> {
        ann::cumulative_error(&self.inner, &pairs_from(pairs)?).map_err(to_py)
    }

    /// Trains a copy on `(z, d)` pairs; returns `(network, epochs_run, trace)`.
    #[pyo3(signature = (pairs, beta = 0.05, max_epochs = 10000, error_goal = 1e-4))]
    fn train(
        &self,
        py: Python<'_>,
        pairs: Vec<(Vec<f64>, Vec<f64>)>,
        beta: f64,
        max_epochs: usize,
        error_goal: f64,
    ) -> PyResult<(Self, usize, Vec<f64>)> {
        let pairs = pairs_from(pairs)?;
        let cfg = TrainerConfig { beta, max_epochs, error_goal, ..Default::default() };
        let (inner, report) = py
            .detach(|| ann::train(&self.inner, &pairs, &cfg))
            .map_err(to_py)?;
        Ok((Self { inner }, report.epochs_run, report.trace))
    }

    fn __repr__(&self) -> String {
        let (i, j, k) = self.shape();
        format!("MlpNetwork({i}-{j}-{k})")
    }
}

#[pyfunction]
#[pyo3(signature = (network, z, d, epsilon = 1e-5))]
fn gradient_check(network: &PyNetwork, z: Vec<f64>, d: Vec<f64>, epsilon: f64) -> PyResult<f64> {
    let pair = TrainingPair::new(z, d).map_err(to_py)?;
    ann::gradient_check(&network.inner, &pair, epsilon).map_err(to_py)
}

fn load_spec(path: &Path, seed: Option<u64>) -> quake_core::Result<pipeline::ExperimentSpec> {
    let cfg = qio::parse_config(BufReader::new(File::open(path)?))?;
    let base = path.parent().unwrap_or(Path::new("."));
    let mut spec = cfg.into_spec(base)?;
    if let Some(s) = seed {
        spec.trainer.seed = s;
    }
    Ok(spec)
}

/// Runs the experiment described by a config file and returns one dict per
/// evaluation case plus the trained network.
#[pyfunction]
#[pyo3(signature = (config, seed = None))]
fn run_experiment<'py>(
    py: Python<'py>,
    config: PathBuf,
    seed: Option<u64>,
) -> PyResult<(Vec<Bound<'py, PyDict>>, PyNetwork)> {
    let spec = load_spec(&config, seed).map_err(to_py)?;
    let result = py.detach(|| pipeline::run_experiment(&spec)).map_err(to_py)?;
    let mut cases = Vec::with_capacity(result.evaluations.len());
    for ev in &result.evaluations {
        let d = PyDict::new(py);
        d.set_item("label", &ev.label)?;
        d.set_item("factor", ev.factor)?;
        d.set_item("axis", &ev.axis)?;
        d.set_item("desired", &ev.desired)?;
        d.set_item("predicted", &ev.predicted)?;
        d.set_item("desired_peak", ev.metrics.desired_peak)?;
        d.set_item("predicted_peak", ev.metrics.predicted_peak)?;
        d.set_item("relative_rms", ev.metrics.relative_rms)?;
        d.set_item("relative_rms_train_range", ev.metrics.relative_rms_train_range)?;
        cases.push(d);
    }
    Ok((cases, PyNetwork { inner: result.network }))
}

#[pymodule]
fn quake(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyRecord>()?;
    m.add_class::<PySystem>()?;
    m.add_class::<PyNetwork>()?;
    m.add_function(wrap_pyfunction!(respond_undamped, m)?)?;
    m.add_function(wrap_pyfunction!(respond_damped, m)?)?;
    m.add_function(wrap_pyfunction!(respond_damped_incremental, m)?)?;
    m.add_function(wrap_pyfunction!(period_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(response_spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(generate_synthetic, m)?)?;
    m.add_function(wrap_pyfunction!(gradient_check, m)?)?;
    m.add_function(wrap_pyfunction!(run_experiment, m)?)?;
    Ok(())
}
