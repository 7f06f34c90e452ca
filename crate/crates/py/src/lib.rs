//! Python bindings. Reports come back as plain dicts and lists.

use cloning_core::channels::{self, ChannelDistribution};
use cloning_core::hcm::{self, AmplitudeGrid};
use cloning_core::linalg::DensityMatrix;
use cloning_core::pcm::{self, DoubleBellAmplitudes, Partition};
use cloning_core::uncertainty::{self, RobertsonVariant};
use cloning_core::verify::{run_verification, VerifyConfig, DEFAULT_SEED};
use cloning_core::{me_states, Error};
use ndarray::Array2;
use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use pyo3::IntoPyObjectExt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::Value;

fn err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn value_to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    match v {
        Value::Null => Ok(py.None().into_bound(py)),
        Value::Bool(b) => b.into_bound_py_any(py),
        Value::Number(n) => match n.as_i64() {
            Some(i) => i.into_bound_py_any(py),
            None => n.as_f64().unwrap_or(f64::NAN).into_bound_py_any(py),
        },
        Value::String(s) => s.into_bound_py_any(py),
        Value::Array(items) => {
            let list = PyList::empty(py);
            for item in items {
                list.append(value_to_py(py, item)?)?;
            }
            Ok(list.into_any())
        }
        Value::Object(map) => {
            let dict = PyDict::new(py);
            for (k, item) in map {
                dict.set_item(k, value_to_py(py, item)?)?;
            }
            Ok(dict.into_any())
        }
    }
}

fn to_py<'py, T: Serialize>(py: Python<'py>, v: &T) -> PyResult<Bound<'py, PyAny>> {
    let value = serde_json::to_value(v).map_err(|e| PyValueError::new_err(e.to_string()))?;
    value_to_py(py, &value)
}

fn channel_from_rows(rows: Vec<Vec<f64>>) -> PyResult<ChannelDistribution> {
    ChannelDistribution::from_rows(&rows).map_err(err)
}

fn density_from_rows(rows: Vec<Vec<Complex64>>) -> PyResult<DensityMatrix> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(PyValueError::new_err("density matrix must be square"));
    }
    let flat: Vec<Complex64> = rows.into_iter().flatten().collect();
    let mat =
        Array2::from_shape_vec((n, n), flat).map_err(|e| PyValueError::new_err(e.to_string()))?;
    DensityMatrix::new(vec![n], mat).map_err(err)
}

/// Amplitudes `alpha_{m,n}` of an N-dimensional cloning machine, row-major.
#[pyclass(
    name = "AmplitudeGrid",
    frozen,
    skip_from_py_object,
    module = "cloning_machines"
)]
#[derive(Clone)]
struct PyGrid(AmplitudeGrid);

#[pymethods]
impl PyGrid {
    #[new]
    #[pyo3(signature = (dim, amplitudes, normalize = false))]
    fn new(dim: usize, amplitudes: Vec<Complex64>, normalize: bool) -> PyResult<Self> {
        let g = if normalize {
            AmplitudeGrid::normalized(dim, amplitudes)
        } else {
            AmplitudeGrid::new(dim, amplitudes)
        };
        g.map(Self).map_err(err)
    }

    #[staticmethod]
    fn delta(dim: usize, m: usize, n: usize) -> PyResult<Self> {
        AmplitudeGrid::delta(dim, m, n).map(Self).map_err(err)
    }

    #[staticmethod]
    fn random(dim: usize, seed: u64) -> PyResult<Self> {
        AmplitudeGrid::random(dim, &mut ChaCha8Rng::seed_from_u64(seed))
            .map(Self)
            .map_err(err)
    }

    #[staticmethod]
    fn ucm(dim: usize) -> PyResult<Self> {
        hcm::ucm_ndim(dim).map(Self).map_err(err)
    }

    #[staticmethod]
    fn isotropic(a: f64, dim: usize) -> PyResult<Self> {
        hcm::isotropic_hcm(a, dim)
            .map(|m| Self(m.grid()))
            .map_err(err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        AmplitudeGrid::from_json(text).map(Self).map_err(err)
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn amplitudes(&self) -> Vec<Complex64> {
        self.0.amplitudes().to_vec()
    }

    /// Channel of output A, `p_{m,n} = |alpha_{m,n}|^2`, as rows.
    fn channel(&self) -> Vec<Vec<f64>> {
        self.0.channel().rows()
    }

    fn fourier_dual(&self) -> Self {
        Self(hcm::fourier_dual(&self.0))
    }

    fn is_symmetric(&self, tol: f64) -> bool {
        self.0.is_symmetric(tol)
    }

    fn to_json(&self) -> String {
        self.0.to_json().to_string()
    }

    /// Channels of the three outputs from the full 4-partite simulation.
    fn output_channels<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let out = hcm::output_channels(&self.0).map_err(err)?;
        to_py(py, &out)
    }

    /// State over (R, A, B, C) as a flat amplitude list.
    fn four_partite_state(&self) -> PyResult<Vec<Complex64>> {
        hcm::build_four_partite(&self.0)
            .map(|s| s.to_vec())
            .map_err(err)
    }

    fn entropic_check<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let (p, q) = hcm::analytic_channels(&self.0);
        to_py(py, &uncertainty::entropic_check(&p, &q).map_err(err)?)
    }

    fn marginal_entropic_check<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &uncertainty::marginal_entropic_check(&self.0))
    }

    fn __repr__(&self) -> String {
        format!("AmplitudeGrid(dim={})", self.0.dim())
    }
}

/// Qubit machine `(v, z, x, y)` on the double-Bell basis.
#[pyclass(
    name = "DoubleBellAmplitudes",
    frozen,
    skip_from_py_object,
    module = "cloning_machines"
)]
#[derive(Clone)]
struct PyAmps(DoubleBellAmplitudes);

fn parse_partition(name: &str) -> PyResult<Partition> {
    match name {
        "rb_ac" => Ok(Partition::RbAc),
        "rc_ab" => Ok(Partition::RcAb),
        other => Err(PyValueError::new_err(format!(
            "partition must be 'rb_ac' or 'rc_ab', got '{other}'"
        ))),
    }
}

#[pymethods]
impl PyAmps {
    #[new]
    fn new(v: Complex64, z: Complex64, x: Complex64, y: Complex64) -> PyResult<Self> {
        DoubleBellAmplitudes::new(v, z, x, y).map(Self).map_err(err)
    }

    #[staticmethod]
    fn ucm() -> Self {
        Self(pcm::ucm_qubit())
    }

    #[staticmethod]
    fn triplicator(x: f64) -> PyResult<Self> {
        pcm::triplicator(x).map(Self).map_err(err)
    }

    #[staticmethod]
    #[pyo3(signature = (theta, phi, reflected = false))]
    fn symmetric(theta: f64, phi: f64, reflected: bool) -> PyResult<Self> {
        pcm::symmetric_pcm_variant(theta, phi, reflected)
            .map(|p| Self(p.amps()))
            .map_err(err)
    }

    #[staticmethod]
    fn isotropic(a: f64) -> PyResult<Self> {
        pcm::isotropic_pcm_ab(a)
            .map(|m| Self(m.amps()))
            .map_err(err)
    }

    fn to_list(&self) -> Vec<Complex64> {
        self.0.as_array().to_vec()
    }

    fn repartition(&self, partition: &str) -> PyResult<Self> {
        Ok(Self(pcm::repartition(&self.0, parse_partition(partition)?)))
    }

    /// `[(1 - p, p_z, p_x, p_y)]` for outputs A, B and C.
    fn output_channels(&self) -> Vec<Vec<f64>> {
        pcm::output_channels(&self.0)
            .iter()
            .map(|c| c.probs().to_vec())
            .collect()
    }

    fn joint_output_entropy(&self) -> f64 {
        pcm::joint_output_entropy(&self.0)
    }

    fn robertson_check<'py>(&self, py: Python<'py>, variant: u8) -> PyResult<Bound<'py, PyAny>> {
        let v = RobertsonVariant::try_from(variant).map_err(err)?;
        to_py(py, &uncertainty::robertson_check(&self.0, v))
    }

    fn grid(&self) -> PyGrid {
        PyGrid(self.0.to_grid())
    }

    fn __repr__(&self) -> String {
        let [v, z, x, y] = self.0.as_array();
        format!("DoubleBellAmplitudes(v={v}, z={z}, x={x}, y={y})")
    }
}

#[pyfunction]
fn me_state(m: usize, n: usize, dim: usize) -> PyResult<Vec<Complex64>> {
    let idx = me_states::MeIndex::new(m, n, dim).map_err(err)?;
    Ok(me_states::me_state(idx).to_vec())
}

#[pyfunction]
fn frontier<'py>(py: Python<'py>, dim: usize, samples: usize) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &hcm::frontier(dim, samples).map_err(err)?)
}

#[pyfunction]
fn symmetric_point<'py>(py: Python<'py>, dim: usize) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &hcm::symmetric_point(dim).map_err(err)?)
}

#[pyfunction]
fn capacity_upper_bound<'py>(
    py: Python<'py>,
    p_x: f64,
    p_y: f64,
    p_z: f64,
) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &pcm::capacity_upper_bound(p_x, p_y, p_z).map_err(err)?)
}

/// Channel given as N x N rows applied to a density matrix given as rows.
#[pyfunction]
fn apply_channel(probs: Vec<Vec<f64>>, rho: Vec<Vec<Complex64>>) -> PyResult<Vec<Vec<Complex64>>> {
    let ch = channel_from_rows(probs)?;
    let out = channels::apply_channel(&ch, &density_from_rows(rho)?).map_err(err)?;
    Ok(out
        .matrix()
        .rows()
        .into_iter()
        .map(|r| r.to_vec())
        .collect())
}

#[pyfunction]
fn depolarizing_fraction(probs: Vec<Vec<f64>>) -> PyResult<f64> {
    channels::depolarizing_fraction(&channel_from_rows(probs)?)
        .map(|f| f.fraction)
        .map_err(err)
}

#[pyfunction]
fn entropic_check<'py>(
    py: Python<'py>,
    p: Vec<Vec<f64>>,
    q: Vec<Vec<f64>>,
) -> PyResult<Bound<'py, PyAny>> {
    let r =
        uncertainty::entropic_check(&channel_from_rows(p)?, &channel_from_rows(q)?).map_err(err)?;
    to_py(py, &r)
}

#[pyfunction]
#[pyo3(signature = (dim = 3, samples = 100, seed = DEFAULT_SEED, tolerance = 1e-9))]
fn verify<'py>(
    py: Python<'py>,
    dim: usize,
    samples: usize,
    seed: u64,
    tolerance: f64,
) -> PyResult<Bound<'py, PyAny>> {
    let cfg = VerifyConfig {
        dim,
        samples,
        seed,
        tolerance,
        inject_fault: false,
    };
    let report = py.detach(|| run_verification(&cfg)).map_err(err)?;
    let out = to_py(py, &report)?;
    out.set_item("all_passed", report.all_passed())?;
    Ok(out)
}

#[pymodule]
fn cloning_machines(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGrid>()?;
    m.add_class::<PyAmps>()?;
    m.add_function(wrap_pyfunction!(me_state, m)?)?;
    m.add_function(wrap_pyfunction!(frontier, m)?)?;
    m.add_function(wrap_pyfunction!(symmetric_point, m)?)?;
    m.add_function(wrap_pyfunction!(capacity_upper_bound, m)?)?;
    m.add_function(wrap_pyfunction!(apply_channel, m)?)?;
    m.add_function(wrap_pyfunction!(depolarizing_fraction, m)?)?;
    m.add_function(wrap_pyfunction!(entropic_check, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add("DEFAULT_SEED", DEFAULT_SEED)?;
    Ok(())
}
