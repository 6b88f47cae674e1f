//! GKP qubits at peak-variance resolution: misidentification probabilities,
//! lattice binning, Steane-type single-qubit error correction, highly
//! reliable measurement and analog likelihoods.

mod binning;
mod probability;
mod sqec;

pub use binning::{bin_outcome, sample_gkp_measurement, BinnedOutcome};
pub use probability::{
    analog_likelihoods, hrm_sample, hrm_stats, lattice_flip_probability, p_fail, HrmStats,
};
pub use sqec::{sqec_sequence, sqec_step, sqec_trajectory, SqecSample};

use crate::special::SQRT_PI;
use crate::{Error, Result};

/// Lattice spacing of a qunaught state.
pub const QUNAUGHT_SPACING: f64 = 2.506_628_274_631_000_5;

/// A GKP state reduced to its per-quadrature peak variances and lattice
/// spacing. The envelope is not tracked.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GkpPeakModel {
    pub var_q: f64,
    pub var_p: f64,
    pub spacing: f64,
}

impl GkpPeakModel {
    pub fn new(var_q: f64, var_p: f64, spacing: f64) -> Result<Self> {
        for (name, v) in [("var_q", var_q), ("var_p", var_p), ("spacing", spacing)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter {
                    name,
                    reason: format!("{v} is not a positive finite number"),
                });
            }
        }
        Ok(Self { var_q, var_p, spacing })
    }

    /// Qubit on the `√π` lattice.
    pub fn qubit(var_q: f64, var_p: f64) -> Result<Self> {
        Self::new(var_q, var_p, SQRT_PI)
    }

    /// Symmetric qubit with `σ²` in both quadratures.
    pub fn symmetric(var: f64) -> Result<Self> {
        Self::qubit(var, var)
    }

    pub fn qunaught(var_q: f64, var_p: f64) -> Result<Self> {
        Self::new(var_q, var_p, QUNAUGHT_SPACING)
    }

    /// Squeezing level `−10 log₁₀(2σ²)` of the q peaks, in dB.
    pub fn squeezing_db(&self) -> f64 {
        -10.0 * (2.0 * self.var_q).log10()
    }
}
