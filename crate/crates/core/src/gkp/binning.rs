use rand::Rng;
use rand_distr::{Distribution, Normal};

use super::GkpPeakModel;
use crate::{Error, Result};

/// A homodyne outcome split into lattice point and deviation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BinnedOutcome {
    /// Parity of `index`.
    pub bit: u8,
    /// Lattice index `k` of the nearest lattice point `k·spacing`.
    pub index: i64,
    /// `raw − k·spacing`, in `(−spacing/2, spacing/2]`.
    pub deviation: f64,
    pub raw: f64,
}

/// Nearest-lattice-point decomposition of `raw` with the half-open bin
/// `(−s/2, s/2]` around every lattice point.
pub fn bin_outcome(raw: f64, spacing: f64) -> Result<BinnedOutcome> {
    if !(spacing > 0.0 && spacing.is_finite()) {
        return Err(Error::invalid("spacing", format!("{spacing} is not positive")));
    }
    if !raw.is_finite() {
        return Err(Error::invalid("raw", "outcome is not finite"));
    }
    let half = 0.5 * spacing;
    let mut k = (raw / spacing - 0.5).ceil();
    // The rounded division can be off by one next to a boundary; settle it
    // with the exact residual.
    loop {
        let dev = raw - k * spacing;
        if dev > half {
            k += 1.0;
        } else if dev <= -half {
            k -= 1.0;
        } else {
            break;
        }
    }
    let index = k as i64;
    Ok(BinnedOutcome {
        bit: index.rem_euclid(2) as u8,
        index,
        deviation: raw - k * spacing,
        raw,
    })
}

/// Samples a q-homodyne outcome on a GKP state of logical value `true_bit`.
pub fn sample_gkp_measurement<R: Rng + ?Sized>(
    model: &GkpPeakModel,
    true_bit: u8,
    rng: &mut R,
) -> Result<BinnedOutcome> {
    if true_bit > 1 {
        return Err(Error::invalid("true_bit", format!("{true_bit} is not a bit")));
    }
    let noise = Normal::new(0.0, model.var_q.sqrt()).map_err(|e| Error::Numerical(e.to_string()))?;
    bin_outcome(f64::from(true_bit) * model.spacing + noise.sample(rng), model.spacing)
}
