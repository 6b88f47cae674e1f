use nalgebra::DVector;
use rand::Rng;
use rand_distr::{Distribution, Normal};

use super::GaussianState;
use crate::{Error, Result};

/// How a lossy homodyne signal is brought back to unit gain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AmplificationMode {
    /// Phase-insensitive amplifier of gain `1/η` after the loss.
    Post,
    /// Phase-insensitive amplifier of gain `1/η` before the loss.
    Pre,
    /// Classical rescaling of the outcome by `1/√η`.
    Rescale,
}

fn check_eta(eta: f64, allow_zero: bool) -> Result<()> {
    let ok = if allow_zero {
        (0.0..=1.0).contains(&eta)
    } else {
        eta > 0.0 && eta <= 1.0
    };
    if ok {
        Ok(())
    } else {
        Err(Error::invalid("eta", format!("{eta} outside the admissible range")))
    }
}

fn check_xi2(xi2: f64) -> Result<()> {
    if xi2 >= 0.0 && xi2.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid("xi2", format!("{xi2} is not a finite non-negative variance")))
    }
}

fn all_modes(state: &GaussianState) -> Vec<usize> {
    (0..state.n_modes()).collect()
}

/// Pure-loss channel of transmissivity `η` on every mode.
pub fn loss_channel(state: &GaussianState, eta: f64) -> Result<GaussianState> {
    loss_channel_on(state, eta, &all_modes(state))
}

/// Pure-loss channel on selected modes: mean `√η·x`, covariance `ηΣ + (1−η)/2`.
pub fn loss_channel_on(state: &GaussianState, eta: f64, modes: &[usize]) -> Result<GaussianState> {
    check_eta(eta, true)?;
    gain_map(state, eta, 0.5 * (1.0 - eta), modes)
}

/// Phase-insensitive amplifier of gain `G ≥ 1` on every mode:
/// mean `√G·x`, covariance `GΣ + (G−1)/2`.
pub fn amplifier_channel(state: &GaussianState, gain: f64) -> Result<GaussianState> {
    if !(gain >= 1.0 && gain.is_finite()) {
        return Err(Error::invalid("gain", format!("{gain} is below unity")));
    }
    gain_map(state, gain, 0.5 * (gain - 1.0), &all_modes(state))
}

/// Classical rescaling of all outcomes by `1/√η` (mean `x/√η`, covariance `Σ/η`).
/// Not a physical channel; used to model post-processing of homodyne data.
pub fn rescale_outcomes(state: &GaussianState, eta: f64) -> Result<GaussianState> {
    check_eta(eta, false)?;
    gain_map(state, 1.0 / eta, 0.0, &all_modes(state))
}

fn gain_map(state: &GaussianState, gain: f64, noise: f64, modes: &[usize]) -> Result<GaussianState> {
    let mut mean = state.mean().clone();
    let mut cov = state.cov().clone();
    let mut idx = Vec::with_capacity(2 * modes.len());
    for &m in modes {
        state.check_mode(m)?;
        idx.extend([2 * m, 2 * m + 1]);
    }
    let amp = gain.sqrt();
    for &i in &idx {
        mean[i] *= amp;
        cov.row_mut(i).scale_mut(amp);
        cov.column_mut(i).scale_mut(amp);
        cov[(i, i)] += noise;
    }
    Ok(GaussianState::from_parts_unchecked(mean, cov))
}

/// Ensemble additive Gaussian noise: `Σ → Σ + ξ²I` on every mode.
pub fn agn_channel(state: &GaussianState, xi2: f64) -> Result<GaussianState> {
    agn_channel_on(state, xi2, &all_modes(state))
}

pub fn agn_channel_on(state: &GaussianState, xi2: f64, modes: &[usize]) -> Result<GaussianState> {
    check_xi2(xi2)?;
    let mut cov = state.cov().clone();
    for &m in modes {
        state.check_mode(m)?;
        cov[(2 * m, 2 * m)] += xi2;
        cov[(2 * m + 1, 2 * m + 1)] += xi2;
    }
    Ok(GaussianState::from_parts_unchecked(state.mean().clone(), cov))
}

/// One trajectory of the AGN channel: the mean is displaced by an
/// independent `N(0, ξ²)` shift on every quadrature, the covariance is kept.
pub fn sample_agn<R: Rng + ?Sized>(
    state: &GaussianState,
    xi2: f64,
    rng: &mut R,
) -> Result<GaussianState> {
    check_xi2(xi2)?;
    let normal = Normal::new(0.0, xi2.sqrt()).map_err(|e| Error::Numerical(e.to_string()))?;
    let shift = DVector::from_fn(state.mean().len(), |_, _| normal.sample(rng));
    state.displaced(&shift)
}

/// Variance of a single quadrature after pure loss.
pub fn loss_variance(var: f64, eta: f64) -> Result<f64> {
    check_eta(eta, true)?;
    Ok(eta * var + 0.5 * (1.0 - eta))
}

/// Extra variance, in AGN-equivalent form, contributed by loss `η` together
/// with the chosen gain-restoration technique.
pub fn amplification_noise(eta: f64, mode: AmplificationMode) -> Result<f64> {
    check_eta(eta, false)?;
    Ok(match mode {
        AmplificationMode::Post => (1.0 - eta) / eta,
        AmplificationMode::Pre => 1.0 - eta,
        AmplificationMode::Rescale => (1.0 - eta) / (2.0 * eta),
    })
}

/// Peak variance after loss `η` and gain restoration.
pub fn amplify(var: f64, eta: f64, mode: AmplificationMode) -> Result<f64> {
    Ok(var + amplification_noise(eta, mode)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::{physicality_check, vacuum_state, GateKind};
    use nalgebra::DMatrix;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn probe() -> GaussianState {
        GaussianState::squeezed_vacuum(0.8)
            .tensor(&GaussianState::coherent(1.5, -0.5))
            .apply(GateKind::BeamSplitter(1.1), &[0, 1])
            .unwrap()
    }

    #[test]
    fn unit_transmission_and_zero_noise_are_identity() {
        let s = probe();
        assert_eq!(loss_channel(&s, 1.0).unwrap(), s);
        assert_eq!(agn_channel(&s, 0.0).unwrap(), s);
        assert_eq!(amplifier_channel(&s, 1.0).unwrap(), s);
    }

    #[test]
    fn full_loss_gives_vacuum() {
        let s = loss_channel(&probe(), 0.0).unwrap();
        assert_eq!(s, vacuum_state(2).unwrap());
    }

    #[test]
    fn agn_on_vacuum() {
        let s = agn_channel(&vacuum_state(1).unwrap(), 0.1).unwrap();
        assert!((s.cov() - DMatrix::identity(2, 2) * 0.6).amax() < 1e-15);
    }

    #[test]
    fn loss_variance_example() {
        assert!((loss_variance(0.01, 0.95).unwrap() - 0.0345).abs() < 1e-15);
    }

    #[test]
    fn amplification_examples() {
        let eta = 0.9;
        assert!((amplify(0.01, eta, AmplificationMode::Pre).unwrap() - 0.11).abs() < 1e-15);
        assert!((amplify(0.01, eta, AmplificationMode::Post).unwrap() - (0.01 + 1.0 / 9.0)).abs() < 1e-15);
        assert!((amplify(0.01, eta, AmplificationMode::Rescale).unwrap() - (0.01 + 1.0 / 18.0)).abs() < 1e-15);
        for mode in [AmplificationMode::Pre, AmplificationMode::Post, AmplificationMode::Rescale] {
            assert_eq!(amplify(0.3, 1.0, mode).unwrap(), 0.3);
        }
        assert!(amplify(0.01, 0.0, AmplificationMode::Pre).is_err());
    }

    #[test]
    fn pre_amplified_loss_is_additive_noise() {
        let s = probe();
        let eta = 0.83;
        let lossy = loss_channel(&amplifier_channel(&s, 1.0 / eta).unwrap(), eta).unwrap();
        let agn = agn_channel(&s, 1.0 - eta).unwrap();
        assert!((lossy.cov() - agn.cov()).amax() < 1e-12);
        assert!((lossy.mean() - agn.mean()).amax() < 1e-12);
    }

    #[test]
    fn post_amplified_and_rescaled_loss_match_variance_maps() {
        let s = probe();
        let eta = 0.7;
        let post = amplifier_channel(&loss_channel(&s, eta).unwrap(), 1.0 / eta).unwrap();
        let resc = rescale_outcomes(&loss_channel(&s, eta).unwrap(), eta).unwrap();
        let v = s.cov()[(0, 0)];
        let post_v = amplify(v, eta, AmplificationMode::Post).unwrap();
        let resc_v = amplify(v, eta, AmplificationMode::Rescale).unwrap();
        assert!((post.cov()[(0, 0)] - post_v).abs() < 1e-12);
        assert!((resc.cov()[(0, 0)] - resc_v).abs() < 1e-12);
    }

    #[test]
    fn channels_keep_states_physical() {
        let s = loss_channel(&agn_channel(&probe(), 0.05).unwrap(), 0.4).unwrap();
        assert!(physicality_check(&s).is_physical);
    }

    #[test]
    fn invalid_parameters() {
        let s = probe();
        assert!(loss_channel(&s, 1.1).is_err());
        assert!(loss_channel(&s, -0.1).is_err());
        assert!(agn_channel(&s, -1e-3).is_err());
        assert!(amplifier_channel(&s, 0.5).is_err());
        assert!(loss_channel_on(&s, 0.5, &[2]).is_err());
    }

    #[test]
    fn sampled_agn_shift_variance() {
        let xi2 = 0.1;
        let n = 1_000_000usize;
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let v = vacuum_state(1).unwrap();
        let (mut sum, mut sum2) = (0.0, 0.0);
        for _ in 0..n {
            let x = sample_agn(&v, xi2, &mut rng).unwrap().mean()[0];
            sum += x;
            sum2 += x * x;
        }
        let mean = sum / n as f64;
        let var = sum2 / n as f64 - mean * mean;
        // standard error of a sample variance of a normal is ξ²√(2/n)
        let se = xi2 * (2.0 / n as f64).sqrt();
        assert!((var - xi2).abs() < 3.0 * se, "var {var}");
    }
}
