use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::{Distribution, Normal};

use super::{bin_outcome, p_fail, GkpPeakModel};
use crate::gaussian::{apply_gate, make_gate, GateKind, GaussianState, Quadrature};
use crate::special::SQRT_PI;
use crate::{Error, Result};

fn check_lattice(data: &GkpPeakModel, ancilla: &GkpPeakModel) -> Result<()> {
    if data.spacing != ancilla.spacing || (data.spacing - SQRT_PI).abs() > 1e-12 {
        return Err(Error::invalid(
            "spacing",
            format!("data {} and ancilla {} must share the √π lattice", data.spacing, ancilla.spacing),
        ));
    }
    Ok(())
}

/// Variance bookkeeping of one Steane-type correction of `quad`: the data
/// variance in `quad` is replaced by the ancilla's, the conjugate variances
/// add, and the correction fails with `p_fail(σ²_D + σ²_A)`.
pub fn sqec_step(
    data: &GkpPeakModel,
    ancilla: &GkpPeakModel,
    quad: Quadrature,
) -> Result<(GkpPeakModel, f64)> {
    check_lattice(data, ancilla)?;
    let (out, p_flip) = match quad {
        Quadrature::Q => (
            GkpPeakModel { var_q: ancilla.var_q, var_p: data.var_p + ancilla.var_p, ..*data },
            p_fail(data.var_q + ancilla.var_q)?,
        ),
        Quadrature::P => (
            GkpPeakModel { var_q: data.var_q + ancilla.var_q, var_p: ancilla.var_p, ..*data },
            p_fail(data.var_p + ancilla.var_p)?,
        ),
    };
    Ok((out, p_flip))
}

/// A q-correction with `first` followed by a p-correction with `second`.
/// Returns the final data model and the two failure probabilities.
pub fn sqec_sequence(
    data: &GkpPeakModel,
    first: &GkpPeakModel,
    second: &GkpPeakModel,
) -> Result<(GkpPeakModel, [f64; 2])> {
    let (mid, pq) = sqec_step(data, first, Quadrature::Q)?;
    let (out, pp) = sqec_step(&mid, second, Quadrature::P)?;
    Ok((out, [pq, pp]))
}

/// One sampled run of the correction circuit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SqecSample {
    /// The correction displaced the data by an odd multiple of `√π`.
    pub flip: bool,
    /// Residual data shift in the corrected quadrature, reduced to the bin
    /// around zero.
    pub residual_corrected: f64,
    /// Residual data shift in the conjugate quadrature.
    pub residual_conjugate: f64,
}

/// Simulates one correction by tracking displacement errors as the means of
/// a two-mode state (data = mode 0, ancilla = mode 1) through the CX gate,
/// reading the ancilla, binning and feeding the deviation forward.
pub fn sqec_trajectory<R: Rng + ?Sized>(
    data: &GkpPeakModel,
    ancilla: &GkpPeakModel,
    quad: Quadrature,
    rng: &mut R,
) -> Result<SqecSample> {
    check_lattice(data, ancilla)?;
    let mut draw = |var: f64| -> Result<f64> {
        Ok(Normal::new(0.0, var.sqrt())
            .map_err(|e| Error::Numerical(e.to_string()))?
            .sample(rng))
    };
    let errors = vec![draw(data.var_q)?, draw(data.var_p)?, draw(ancilla.var_q)?, draw(ancilla.var_p)?];
    // Only first moments matter for a displacement trajectory.
    let state = GaussianState::new(DVector::from_vec(errors), DMatrix::zeros(4, 4))?;
    let (targets, read, fix) = match quad {
        // data controls; q_A picks up q_D
        Quadrature::Q => ([0, 1], 2, 0),
        // ancilla controls; p_A picks up −p_D
        Quadrature::P => ([1, 0], 3, 1),
    };
    let state = apply_gate(&state, &make_gate(GateKind::Cx, &targets, 2)?)?;
    let binned = bin_outcome(state.mean()[read], SQRT_PI)?;
    let sign = match quad {
        Quadrature::Q => -1.0,
        Quadrature::P => 1.0,
    };
    let mut shift = DVector::zeros(4);
    shift[fix] = sign * binned.deviation;
    let state = state.displaced(&shift)?;
    let corrected = state.mean()[fix];
    let residual = bin_outcome(corrected, SQRT_PI)?;
    Ok(SqecSample {
        flip: residual.bit == 1,
        residual_corrected: residual.deviation,
        residual_conjugate: state.mean()[1 - fix],
    })
}
