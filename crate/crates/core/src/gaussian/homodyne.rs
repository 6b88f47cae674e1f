use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::{Distribution, Normal};

use super::{GateKind, GaussianState};
use crate::{Error, Result};

/// A homodyne result and the post-measurement state of the remaining modes.
#[derive(Clone, Debug, PartialEq)]
pub struct HomodyneOutcome {
    pub value: f64,
    /// `None` when the measured mode was the only one.
    pub conditioned: Option<GaussianState>,
    /// Mean of the measured marginal before the measurement.
    pub marginal_mean: f64,
    /// Variance of the measured marginal before the measurement.
    pub marginal_var: f64,
}

/// Measures `x_φ = q cosφ + p sinφ` on `mode`, sampling the outcome from its
/// Gaussian marginal.
pub fn homodyne<R: Rng + ?Sized>(
    state: &GaussianState,
    mode: usize,
    phi: f64,
    rng: &mut R,
) -> Result<HomodyneOutcome> {
    let rotated = rotate_to_q(state, mode, phi)?;
    let (mu, var) = marginal(&rotated, mode)?;
    let value = Normal::new(mu, var.sqrt())
        .map_err(|e| Error::Numerical(e.to_string()))?
        .sample(rng);
    condition(&rotated, mode, value, mu, var)
}

/// Same as [`homodyne`] with a prescribed outcome.
pub fn homodyne_with_outcome(
    state: &GaussianState,
    mode: usize,
    phi: f64,
    value: f64,
) -> Result<HomodyneOutcome> {
    let rotated = rotate_to_q(state, mode, phi)?;
    let (mu, var) = marginal(&rotated, mode)?;
    condition(&rotated, mode, value, mu, var)
}

fn rotate_to_q(state: &GaussianState, mode: usize, phi: f64) -> Result<GaussianState> {
    state.check_mode(mode)?;
    if phi == 0.0 {
        return Ok(state.clone());
    }
    // R(−φ) sends q to q cosφ + p sinφ.
    state.apply(GateKind::Rotate(-phi), &[mode])
}

fn marginal(state: &GaussianState, mode: usize) -> Result<(f64, f64)> {
    let a = 2 * mode;
    let var = state.cov()[(a, a)];
    if !(var > 0.0) {
        return Err(Error::SingularMarginal(var));
    }
    Ok((state.mean()[a], var))
}

fn condition(
    state: &GaussianState,
    mode: usize,
    value: f64,
    mu: f64,
    var: f64,
) -> Result<HomodyneOutcome> {
    let a = 2 * mode;
    let keep: Vec<usize> = (0..state.mean().len())
        .filter(|&i| i != a && i != a + 1)
        .collect();
    let conditioned = if keep.is_empty() {
        None
    } else {
        let cov = state.cov();
        let k = keep.len();
        let cross = DVector::from_iterator(k, keep.iter().map(|&i| cov[(i, a)]));
        let gain = &cross / var;
        let mean = DVector::from_iterator(k, keep.iter().map(|&i| state.mean()[i])) + &gain * (value - mu);
        let cov = DMatrix::from_fn(k, k, |r, c| cov[(keep[r], keep[c])]) - &gain * cross.transpose();
        Some(GaussianState::from_parts_unchecked(mean, cov))
    };
    Ok(HomodyneOutcome {
        value,
        conditioned,
        marginal_mean: mu,
        marginal_var: var,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::{physicality_check, vacuum_state};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_PI_2;

    fn two_mode_squeezed(r: f64) -> GaussianState {
        GaussianState::squeezed_vacuum(r)
            .tensor(&GaussianState::squeezed_vacuum(-r))
            .apply(GateKind::BeamSplitter(FRAC_PI_2), &[0, 1])
            .unwrap()
    }

    #[test]
    fn single_vacuum_mode_leaves_nothing() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let out = homodyne(&vacuum_state(1).unwrap(), 0, 0.0, &mut rng).unwrap();
        assert!(out.conditioned.is_none());
        assert_eq!(out.marginal_var, 0.5);
    }

    #[test]
    fn conditioning_on_two_mode_squeezed_state() {
        let r = 1.5;
        let s = two_mode_squeezed(r);
        // Closed-form Gaussian conditioning on the 4x4 covariance.
        let c = s.cov();
        let (cqq, c2q, c2p) = (c[(0, 0)], c[(2, 0)], c[(3, 0)]);
        let x = 0.8;
        let out = homodyne_with_outcome(&s, 0, 0.0, x).unwrap();
        let rest = out.conditioned.unwrap();
        assert!((rest.mean()[0] - c2q / cqq * x).abs() < 1e-12);
        assert!((rest.mean()[1] - c2p / cqq * x).abs() < 1e-12);
        assert!((rest.cov()[(0, 0)] - (c[(2, 2)] - c2q * c2q / cqq)).abs() < 1e-12);
        // both output modes carry ±e^{±2r}/4 correlations; conditioning on q1 pins q2
        assert!(rest.cov()[(0, 0)] < 0.5);
        assert!(c2q.abs() > 0.1);
        assert!(physicality_check(&rest).is_physical);
    }

    #[test]
    fn product_state_block_unchanged() {
        let a = GaussianState::squeezed_vacuum(0.4);
        let b = GaussianState::coherent(0.3, 0.7).apply(GateKind::Squeeze(-0.2), &[0]).unwrap();
        let out = homodyne_with_outcome(&a.tensor(&b), 0, 0.9, 1.3).unwrap();
        assert_eq!(out.conditioned.unwrap(), b);
    }

    #[test]
    fn generalized_quadrature_marginal() {
        let s = GaussianState::coherent(1.0, 2.0).apply(GateKind::Squeeze(0.5), &[0]).unwrap();
        let phi = 0.6f64;
        let out = homodyne_with_outcome(&s, 0, phi, 0.0).unwrap();
        let (c, sn) = (phi.cos(), phi.sin());
        let want_mu = c * s.mean()[0] + sn * s.mean()[1];
        let want_var = c * c * s.cov()[(0, 0)] + sn * sn * s.cov()[(1, 1)];
        assert!((out.marginal_mean - want_mu).abs() < 1e-12);
        assert!((out.marginal_var - want_var).abs() < 1e-12);
    }

    #[test]
    fn corrupted_state_reports_singular_marginal() {
        let s = GaussianState::new(DVector::zeros(2), DMatrix::zeros(2, 2)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(matches!(homodyne(&s, 0, 0.0, &mut rng), Err(Error::SingularMarginal(_))));
    }

    #[test]
    fn outcome_statistics_match_marginal() {
        let s = two_mode_squeezed(0.7).apply(GateKind::DisplaceP(0.4), &[1]).unwrap();
        let phi = 2.1;
        let n = 200_000;
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let probe = homodyne_with_outcome(&s, 1, phi, 0.0).unwrap();
        let (mut sum, mut sum2) = (0.0, 0.0);
        for _ in 0..n {
            let v = homodyne(&s, 1, phi, &mut rng).unwrap().value;
            sum += v;
            sum2 += v * v;
        }
        let mean = sum / n as f64;
        let var = sum2 / n as f64 - mean * mean;
        let se_mean = (probe.marginal_var / n as f64).sqrt();
        let se_var = probe.marginal_var * (2.0 / n as f64).sqrt();
        assert!((mean - probe.marginal_mean).abs() < 4.0 * se_mean);
        assert!((var - probe.marginal_var).abs() < 4.0 * se_var);
    }
}
