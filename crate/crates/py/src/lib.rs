use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use pyo3::exceptions::{PyArithmeticError, PyOSError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use cvgkp::bench::{self, Experiment, ExperimentConfig};
use cvgkp::cluster::{self, ClusterGraph};
use cvgkp::fock::{self, Grid, GridWavefunction, OutcomeChoice};
use cvgkp::gaussian::{self, GateKind, Quadrature};
use cvgkp::gkp::{self, GkpPeakModel};
use cvgkp::special::SQRT_PI;
use cvgkp::Error;

fn to_py(err: Error) -> PyErr {
    match err {
        Error::Io(e) => PyOSError::new_err(e.to_string()),
        Error::Numerical(_) | Error::Resolution(_) | Error::SingularMarginal(_) => {
            PyArithmeticError::new_err(err.to_string())
        }
        _ => PyValueError::new_err(err.to_string()),
    }
}

fn gate_kind(name: &str, param: Option<f64>, imag: Option<f64>) -> PyResult<GateKind> {
    let need = || param.ok_or_else(|| PyValueError::new_err(format!("gate `{name}` needs a parameter")));
    Ok(match name {
        "displace_q" => GateKind::DisplaceQ(need()?),
        "displace_p" => GateKind::DisplaceP(need()?),
        "displace" => GateKind::Displace(Complex64::new(need()?, imag.unwrap_or(0.0))),
        "squeeze" => GateKind::Squeeze(need()?),
        "phase" => GateKind::Phase(need()?),
        "rotate" => GateKind::Rotate(need()?),
        "beam_splitter" => GateKind::BeamSplitter(need()?),
        "cz" => GateKind::Cz,
        "cx" => GateKind::Cx,
        _ => return Err(PyValueError::new_err(format!("unknown gate `{name}`"))),
    })
}

fn quadrature(name: &str) -> PyResult<Quadrature> {
    match name {
        "q" => Ok(Quadrature::Q),
        "p" => Ok(Quadrature::P),
        _ => Err(PyValueError::new_err(format!("quadrature must be 'q' or 'p', not `{name}`"))),
    }
}

/// Gaussian state in the interleaved `(q1, p1, ..., qn, pn)` ordering with
/// vacuum covariance `I/2`.
#[pyclass(name = "GaussianState", module = "cvgkp", from_py_object)]
#[derive(Clone)]
struct PyGaussianState(gaussian::GaussianState);

#[pymethods]
impl PyGaussianState {
    #[new]
    fn new(mean: Vec<f64>, cov: Vec<Vec<f64>>) -> PyResult<Self> {
        let n = cov.len();
        if cov.iter().any(|row| row.len() != n) {
            return Err(PyValueError::new_err("covariance must be square"));
        }
        let cov = DMatrix::from_fn(n, n, |i, j| cov[i][j]);
        gaussian::GaussianState::new(DVector::from_vec(mean), cov).map(Self).map_err(to_py)
    }

    #[staticmethod]
    fn vacuum(n_modes: usize) -> PyResult<Self> {
        gaussian::vacuum_state(n_modes).map(Self).map_err(to_py)
    }

    #[staticmethod]
    fn coherent(q: f64, p: f64) -> Self {
        Self(gaussian::GaussianState::coherent(q, p))
    }

    #[staticmethod]
    fn squeezed_vacuum(r: f64) -> Self {
        Self(gaussian::GaussianState::squeezed_vacuum(r))
    }

    #[getter]
    fn n_modes(&self) -> usize {
        self.0.n_modes()
    }

    #[getter]
    fn mean(&self) -> Vec<f64> {
        self.0.mean().iter().copied().collect()
    }

    #[getter]
    fn cov(&self) -> Vec<Vec<f64>> {
        self.0.cov().row_iter().map(|r| r.iter().copied().collect()).collect()
    }

    #[pyo3(signature = (gate, targets, param=None, imag=None))]
    fn apply(&self, gate: &str, targets: Vec<usize>, param: Option<f64>, imag: Option<f64>) -> PyResult<Self> {
        self.0.apply(gate_kind(gate, param, imag)?, &targets).map(Self).map_err(to_py)
    }

    fn tensor(&self, other: &Self) -> Self {
        Self(self.0.tensor(&other.0))
    }

    fn loss(&self, eta: f64) -> PyResult<Self> {
        gaussian::loss_channel(&self.0, eta).map(Self).map_err(to_py)
    }

    fn agn(&self, xi2: f64) -> PyResult<Self> {
        gaussian::agn_channel(&self.0, xi2).map(Self).map_err(to_py)
    }

    /// Conditions on the outcome `value` of a homodyne measurement of
    /// `q cos(phi) + p sin(phi)` on `mode`. Returns the marginal mean and
    /// variance and the state of the remaining modes (None if none remain).
    fn homodyne(&self, mode: usize, phi: f64, value: f64) -> PyResult<(f64, f64, Option<Self>)> {
        let out = gaussian::homodyne_with_outcome(&self.0, mode, phi, value).map_err(to_py)?;
        Ok((out.marginal_mean, out.marginal_var, out.conditioned.map(Self)))
    }

    /// `(is_physical, asymmetry, min_eigenvalue)`.
    fn physicality(&self) -> (bool, f64, f64) {
        let p = self.0.physicality();
        (p.is_physical, p.asymmetry, p.min_eigenvalue)
    }

    fn __repr__(&self) -> String {
        format!("GaussianState(n_modes={})", self.0.n_modes())
    }
}

#[pyfunction]
fn p_fail(var: f64) -> PyResult<f64> {
    gkp::p_fail(var).map_err(to_py)
}

#[pyfunction]
fn lattice_flip_probability(var: f64) -> PyResult<f64> {
    gkp::lattice_flip_probability(var).map_err(to_py)
}

/// `(bit, index, deviation)` of a measured value on a lattice of spacing
/// `spacing`.
#[pyfunction]
#[pyo3(signature = (raw, spacing=SQRT_PI))]
fn bin_outcome(raw: f64, spacing: f64) -> PyResult<(u8, i64, f64)> {
    let b = gkp::bin_outcome(raw, spacing).map_err(to_py)?;
    Ok((b.bit, b.index, b.deviation))
}

#[pyfunction]
fn hrm_stats<'py>(py: Python<'py>, var: f64, zeta: f64) -> PyResult<Bound<'py, PyDict>> {
    let s = gkp::hrm_stats(var, zeta).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("p_accept", s.p_accept)?;
    d.set_item("p_err_and_accept", s.p_err_and_accept)?;
    d.set_item("p_err_given_accept", s.p_err_given_accept)?;
    Ok(d)
}

#[pyfunction]
fn analog_likelihoods(deviation: f64, var: f64) -> PyResult<(f64, f64)> {
    gkp::analog_likelihoods(deviation, var).map_err(to_py)
}

/// One Steane-type correction of `quadrature` ('q' or 'p'). Returns the
/// data variances afterwards and the failure probability.
#[pyfunction]
fn sqec_step(data: (f64, f64), ancilla: (f64, f64), quadrature_name: &str) -> PyResult<(f64, f64, f64)> {
    let d = GkpPeakModel::qubit(data.0, data.1).map_err(to_py)?;
    let a = GkpPeakModel::qubit(ancilla.0, ancilla.1).map_err(to_py)?;
    let (out, p) = gkp::sqec_step(&d, &a, quadrature(quadrature_name)?).map_err(to_py)?;
    Ok((out.var_q, out.var_p, p))
}

#[pyfunction]
fn p_err_cz(var_in: f64) -> PyResult<f64> {
    bench::p_err_cz(var_in).map_err(to_py)
}

/// `(sigma2_star, squeezing_db)` for the target logical error rate.
#[pyfunction]
fn solve_threshold(p_ft: f64) -> PyResult<(f64, f64)> {
    let t = bench::solve_threshold(p_ft).map_err(to_py)?;
    Ok((t.sigma2_star, t.squeezing_db))
}

/// `(sigma, p_e)` where the hashing rate vanishes.
#[pyfunction]
fn capacity_point() -> PyResult<(f64, f64)> {
    let c = bench::capacity_point().map_err(to_py)?;
    Ok((c.sigma, c.p_e))
}

#[pyfunction]
fn analog_vs_binary_mc<'py>(py: Python<'py>, sigma: f64, trials: u64, seed: u64) -> PyResult<Bound<'py, PyDict>> {
    let r = py.detach(|| bench::analog_vs_binary_mc(sigma, trials, seed)).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("p_binary", r.p_binary())?;
    d.set_item("p_analog", r.p_analog())?;
    d.set_item("binary_errors", r.binary_errors)?;
    d.set_item("analog_errors", r.analog_errors)?;
    d.set_item("improvement_z", r.improvement_z())?;
    Ok(d)
}

/// Nullifier variances of the canonical cluster on `n` vertices.
#[pyfunction]
fn cluster_nullifier_variances(n: usize, edges: Vec<(usize, usize)>, r: f64) -> PyResult<Vec<f64>> {
    let graph = ClusterGraph::new(n, &edges).map_err(to_py)?;
    let state = cluster::build_canonical_cluster(&graph, r).map_err(to_py)?;
    cluster::nullifier_variances(&state, &cluster::nullifiers(&graph)).map_err(to_py)
}

/// Most-likely-outcome and outcome-averaged fidelity of the teleported
/// cubic phase gate on vacuum.
#[pyfunction]
fn cubic_phase_fidelity(py: Python<'_>, gamma: f64, resource_db: f64) -> PyResult<(f64, f64)> {
    let t = py
        .detach(|| {
            let vacuum = GridWavefunction::from_fn(Grid::standard(), |x| (-x * x / 2.0).exp().into()).normalized()?;
            fock::cubic_phase_teleport(&vacuum, gamma, resource_db, OutcomeChoice::MostLikely)
        })
        .map_err(to_py)?;
    Ok((t.fidelity, t.average_fidelity))
}

/// Per-round `(peaks, acceptance, fidelity)` of cat-state breeding.
#[pyfunction]
#[pyo3(signature = (alpha, r, rounds, epsilon=0.1))]
fn breeding(py: Python<'_>, alpha: f64, r: f64, rounds: usize, epsilon: f64) -> PyResult<Vec<(usize, f64, f64)>> {
    let res = py.detach(|| fock::breeding_round(alpha, r, rounds, epsilon, Grid::standard())).map_err(to_py)?;
    Ok((0..res.acceptance.len()).map(|k| (res.peaks[k], res.acceptance[k], res.fidelity[k])).collect())
}

/// Runs an experiment from config text and returns the CSV report.
#[pyfunction]
#[pyo3(signature = (experiment, config, seed=None, trials=None))]
fn run_experiment(
    py: Python<'_>,
    experiment: &str,
    config: &str,
    seed: Option<u64>,
    trials: Option<u64>,
) -> PyResult<String> {
    let experiment: Experiment = experiment.parse().map_err(to_py)?;
    let mut cfg = ExperimentConfig::parse(config, Some(experiment)).map_err(to_py)?;
    if let Some(seed) = seed {
        cfg = cfg.with_seed(seed);
    }
    if let Some(trials) = trials {
        cfg = cfg.with_trials(trials).map_err(to_py)?;
    }
    let report = py.detach(|| bench::run_experiment(&cfg)).map_err(to_py)?;
    Ok(report.to_csv(&cfg))
}

#[pymodule]
#[pyo3(name = "cvgkp")]
fn cvgkp_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGaussianState>()?;
    m.add_function(wrap_pyfunction!(p_fail, m)?)?;
    m.add_function(wrap_pyfunction!(lattice_flip_probability, m)?)?;
    m.add_function(wrap_pyfunction!(bin_outcome, m)?)?;
    m.add_function(wrap_pyfunction!(hrm_stats, m)?)?;
    m.add_function(wrap_pyfunction!(analog_likelihoods, m)?)?;
    m.add_function(wrap_pyfunction!(sqec_step, m)?)?;
    m.add_function(wrap_pyfunction!(p_err_cz, m)?)?;
    m.add_function(wrap_pyfunction!(solve_threshold, m)?)?;
    m.add_function(wrap_pyfunction!(capacity_point, m)?)?;
    m.add_function(wrap_pyfunction!(analog_vs_binary_mc, m)?)?;
    m.add_function(wrap_pyfunction!(cluster_nullifier_variances, m)?)?;
    m.add_function(wrap_pyfunction!(cubic_phase_fidelity, m)?)?;
    m.add_function(wrap_pyfunction!(breeding, m)?)?;
    m.add_function(wrap_pyfunction!(run_experiment, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
