use num_complex::Complex64;

use super::{Grid, GridWavefunction};
use crate::special::SQRT_PI;
use crate::{Error, Result};

/// Shape of an approximate GKP codeword: peak width `δ`, envelope `κ`, and
/// a lattice `scale` (1 for the standard `√π` lattice).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GkpShape {
    pub delta2: f64,
    pub kappa2: f64,
    pub scale: f64,
}

impl GkpShape {
    pub fn new(delta2: f64, kappa2: f64, scale: f64) -> Result<Self> {
        for (name, v) in [("delta2", delta2), ("kappa2", kappa2), ("scale", scale)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter { name, reason: format!("{v} is not positive") });
            }
        }
        Ok(Self { delta2, kappa2, scale })
    }

    /// `κ² = δ² = 2σ²` on the standard lattice.
    pub fn from_sigma2(sigma2: f64) -> Result<Self> {
        Self::new(2.0 * sigma2, 2.0 * sigma2, 1.0)
    }
}

/// `Σ_m e^{−κ²μ_m²/2} e^{−(x/scale − μ_m)²/(2δ²)}` with `μ_m = (2m + logical)√π`,
/// normalized on `grid`. Peaks whose envelope weight is below `1e-15` of the
/// central one are dropped.
pub fn approx_gkp(grid: Grid, shape: GkpShape, logical: u8) -> Result<GridWavefunction> {
    if logical > 1 {
        return Err(Error::invalid("logical", format!("{logical} is not a bit")));
    }
    // e^{−κ²μ²/2} < 1e-15 once κ²μ² > 2·ln(1e15)
    let mu_max = (2.0 * 15.0 * std::f64::consts::LN_10 / shape.kappa2).sqrt();
    let m_max = (mu_max / (2.0 * SQRT_PI)).ceil() as i64 + 1;
    let centers: Vec<(f64, f64)> = (-m_max..=m_max)
        .map(|m| {
            let mu = (2 * m + i64::from(logical)) as f64 * SQRT_PI;
            (mu, (-0.5 * shape.kappa2 * mu * mu).exp())
        })
        .filter(|&(_, w)| w >= 1e-15)
        .collect();
    GridWavefunction::from_fn(grid, |x| {
        let u = x / shape.scale;
        let a: f64 = centers
            .iter()
            .map(|&(mu, w)| w * (-(u - mu) * (u - mu) / (2.0 * shape.delta2)).exp())
            .sum();
        Complex64::new(a, 0.0)
    })
    .normalized()
}

/// `|⟨GKP_logical|state⟩|²` against the approximate codeword with
/// `κ² = δ² = 2σ²`.
pub fn gkp_overlap(state: &GridWavefunction, sigma2: f64, logical: u8) -> Result<f64> {
    let shape = GkpShape::from_sigma2(sigma2)?;
    let grid = *state.grid();
    let kappa = shape.kappa2.sqrt();
    if grid.max_abs_x() < 5.0 / kappa || grid.x0 > -5.0 / kappa {
        return Err(Error::Resolution(format!(
            "grid reaches |x| = {:.3}, envelope needs ±{:.3}",
            grid.max_abs_x(),
            5.0 / kappa
        )));
    }
    if grid.dx > 0.5 * shape.delta2.sqrt() {
        return Err(Error::Resolution(format!(
            "spacing {} does not resolve peaks of width {:.4}",
            grid.dx,
            shape.delta2.sqrt()
        )));
    }
    approx_gkp(grid, shape, logical)?.fidelity(state)
}
