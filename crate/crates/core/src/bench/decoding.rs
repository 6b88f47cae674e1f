use rand_distr::{Distribution, Normal};
use rayon::prelude::*;

use super::trial_rng;
use crate::gkp::{analog_likelihoods, bin_outcome, BinnedOutcome};
use crate::special::{gaussian_density, wilson_interval, SQRT_PI};
use crate::{Error, Result};

/// Logical error statistics of the three-qubit repetition code under binary
/// (majority) and analog (likelihood-weighted) decoding.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecodingResult {
    pub sigma: f64,
    pub trials: u64,
    pub binary_errors: u64,
    pub analog_errors: u64,
    /// Trials where only the binary decoder failed.
    pub binary_only: u64,
    /// Trials where only the analog decoder failed.
    pub analog_only: u64,
}

impl DecodingResult {
    pub fn p_binary(&self) -> f64 {
        self.binary_errors as f64 / self.trials as f64
    }

    pub fn p_analog(&self) -> f64 {
        self.analog_errors as f64 / self.trials as f64
    }

    /// 95% Wilson intervals for the binary and analog rates.
    pub fn intervals(&self) -> ((f64, f64), (f64, f64)) {
        (
            wilson_interval(self.binary_errors, self.trials, 1.96),
            wilson_interval(self.analog_errors, self.trials, 1.96),
        )
    }

    /// Paired (McNemar) statistic for "analog beats binary", in standard
    /// deviations. Zero when the decoders never disagree.
    pub fn improvement_z(&self) -> f64 {
        let d = (self.binary_only + self.analog_only) as f64;
        if d == 0.0 {
            0.0
        } else {
            (self.binary_only as f64 - self.analog_only as f64) / d.sqrt()
        }
    }
}

/// Chooses the logical value whose codeword-consistent flip pattern has the
/// larger product of per-qubit likelihoods.
pub fn analog_decode(outcomes: &[BinnedOutcome; 3], var: f64) -> Result<u8> {
    let mut like = [1.0f64; 2];
    for o in outcomes {
        let (no_flip, flip) = analog_likelihoods(o.deviation, var)?;
        // logical c requires a flip on qubit i iff bit_i != c
        for (c, l) in like.iter_mut().enumerate() {
            *l *= if o.bit as usize == c { no_flip } else { flip };
        }
    }
    Ok(u8::from(like[1] > like[0]))
}

/// Exact maximum-likelihood decision from the raw outcomes, summing every
/// lattice peak of each codeword.
pub fn ml_decode(raw: &[f64; 3], var: f64) -> u8 {
    let mut log_like = [0.0f64; 2];
    for &x in raw {
        let centre = (x / SQRT_PI).round() as i64;
        for (c, l) in log_like.iter_mut().enumerate() {
            let mut s = 0.0;
            for k in (centre - 12)..=(centre + 12) {
                if (k - c as i64).rem_euclid(2) == 0 {
                    let d = x - k as f64 * SQRT_PI;
                    s += (-d * d / (2.0 * var)).exp();
                }
            }
            *l += s.ln();
        }
    }
    u8::from(log_like[1] > log_like[0])
}

#[derive(Clone, Copy, Default)]
struct Tally {
    binary: u64,
    analog: u64,
    binary_only: u64,
    analog_only: u64,
}

impl std::ops::Add for Tally {
    type Output = Tally;
    fn add(self, o: Tally) -> Tally {
        Tally {
            binary: self.binary + o.binary,
            analog: self.analog + o.analog,
            binary_only: self.binary_only + o.binary_only,
            analog_only: self.analog_only + o.analog_only,
        }
    }
}

/// Samples one trial: logical 0 encoded in three GKP qubits, each read out
/// with Gaussian noise of standard deviation `sigma`.
pub(crate) fn sample_trial(seed: u64, trial: u64, noise: &Normal<f64>) -> Result<[f64; 3]> {
    let mut rng = trial_rng(seed, trial);
    Ok([noise.sample(&mut rng), noise.sample(&mut rng), noise.sample(&mut rng)])
}

pub(crate) fn bin3(raw: &[f64; 3]) -> Result<[BinnedOutcome; 3]> {
    Ok([bin_outcome(raw[0], SQRT_PI)?, bin_outcome(raw[1], SQRT_PI)?, bin_outcome(raw[2], SQRT_PI)?])
}

pub fn analog_vs_binary_mc(sigma: f64, trials: u64, seed: u64) -> Result<DecodingResult> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::invalid("sigma", format!("{sigma} is not positive")));
    }
    if trials == 0 {
        return Err(Error::invalid("trials", "at least one trial is required"));
    }
    let var = sigma * sigma;
    let noise = Normal::new(0.0, sigma).map_err(|e| Error::Numerical(e.to_string()))?;
    let tally = (0..trials)
        .into_par_iter()
        .map(|t| -> Result<Tally> {
            let raw = sample_trial(seed, t, &noise)?;
            let outcomes = bin3(&raw)?;
            let ones: u8 = outcomes.iter().map(|o| o.bit).sum();
            let binary_fail = ones >= 2;
            let analog_fail = analog_decode(&outcomes, var)? == 1;
            Ok(Tally {
                binary: u64::from(binary_fail),
                analog: u64::from(analog_fail),
                binary_only: u64::from(binary_fail && !analog_fail),
                analog_only: u64::from(analog_fail && !binary_fail),
            })
        })
        .try_reduce(Tally::default, |a, b| Ok(a + b))?;
    Ok(DecodingResult {
        sigma,
        trials,
        binary_errors: tally.binary,
        analog_errors: tally.analog,
        binary_only: tally.binary_only,
        analog_only: tally.analog_only,
    })
}

/// Exhaustive decision over all eight flip patterns. Pattern `e` moves
/// qubit `i` to the neighbouring peak when `e_i = 1`; it is admissible when
/// the corrected bits form a codeword, and the most probable admissible
/// pattern names the logical value.
pub fn pattern_decode(outcomes: &[BinnedOutcome; 3], var: f64) -> u8 {
    let mut best = (f64::NEG_INFINITY, 0u8);
    for e in 0u8..8 {
        let corrected: Vec<u8> = (0..3).map(|i| outcomes[i].bit ^ ((e >> i) & 1)).collect();
        if corrected.iter().any(|&b| b != corrected[0]) {
            continue;
        }
        let log_post: f64 = (0..3)
            .map(|i| {
                let d = outcomes[i].deviation;
                let shift = if (e >> i) & 1 == 1 { SQRT_PI - d.abs() } else { d };
                gaussian_density(shift, var).ln()
            })
            .sum();
        if log_post > best.0 {
            best = (log_post, corrected[0]);
        }
    }
    best.1
}

/// Disagreement counts of the analog decoder against the two oracles.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DecoderAudit {
    pub trials: u64,
    /// Against [`pattern_decode`], which shares the two-peak deviation model.
    pub pattern_disagreements: u64,
    /// Against [`ml_decode`], which sums every lattice peak.
    pub lattice_disagreements: u64,
}

/// Audits the analog decoder on the first `trials` trials of the Monte Carlo
/// stream for `(sigma, seed)`.
pub fn audit_against_ml(sigma: f64, trials: u64, seed: u64) -> Result<DecoderAudit> {
    let var = sigma * sigma;
    let noise = Normal::new(0.0, sigma).map_err(|e| Error::Numerical(e.to_string()))?;
    let (pattern, lattice) = (0..trials)
        .into_par_iter()
        .map(|t| -> Result<(u64, u64)> {
            let raw = sample_trial(seed, t, &noise)?;
            let outcomes = bin3(&raw)?;
            let analog = analog_decode(&outcomes, var)?;
            Ok((
                u64::from(analog != pattern_decode(&outcomes, var)),
                u64::from(analog != ml_decode(&raw, var)),
            ))
        })
        .try_reduce(|| (0, 0), |a, b| Ok((a.0 + b.0, a.1 + b.1)))?;
    Ok(DecoderAudit { trials, pattern_disagreements: pattern, lattice_disagreements: lattice })
}
