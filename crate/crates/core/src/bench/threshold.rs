use crate::gkp::p_fail;
use crate::special::{binary_entropy, bisect};
use crate::{Error, Result};

/// Logical error of a CZ between two GKP qubits after Steane-type
/// correction: two corrections see variance `7σ²` and two see `5σ²`, and the
/// gate fails if any of them does.
pub fn p_err_cz(var_in: f64) -> Result<f64> {
    let a = p_fail(7.0 * var_in)?;
    let b = p_fail(5.0 * var_in)?;
    // 1 − (1−a)²(1−b)² without cancellation for tiny a, b
    let log_ok = 2.0 * (-a).ln_1p() + 2.0 * (-b).ln_1p();
    Ok(-log_ok.exp_m1())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThresholdResult {
    pub sigma2_star: f64,
    /// `−10·log₁₀(2σ²*)`.
    pub squeezing_db: f64,
    pub p_ft_used: f64,
}

/// Largest input variance with `p_err_cz(σ²) ≤ p_ft`.
pub fn solve_threshold(p_ft: f64) -> Result<ThresholdResult> {
    if !(p_ft > 0.0 && p_ft < 1.0) {
        return Err(Error::invalid("p_ft", format!("{p_ft} outside (0, 1)")));
    }
    // Bisect in log σ² so tiny thresholds keep full relative precision.
    let f = |log_var: f64| p_err_cz(log_var.exp()).map(|p| p.ln() - p_ft.ln()).unwrap_or(f64::NAN);
    let log_var = bisect(f, (1e-4f64).ln(), (10.0f64).ln(), 1e-13)?;
    let sigma2_star = log_var.exp();
    Ok(ThresholdResult {
        sigma2_star,
        squeezing_db: -10.0 * (2.0 * sigma2_star).log10(),
        p_ft_used: p_ft,
    })
}

/// `1 − 2·H₂(p_fail(σ²))`; positive where the Gaussian displacement channel
/// has a nonzero rate under independent GKP decoding.
pub fn capacity_rate(var: f64) -> Result<f64> {
    Ok(1.0 - 2.0 * binary_entropy(p_fail(var)?))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CapacityPoint {
    pub sigma: f64,
    pub p_e: f64,
}

/// Noise level where `1 − 2H₂(p_fail(σ²))` vanishes.
pub fn capacity_point() -> Result<CapacityPoint> {
    let f = |sigma: f64| capacity_rate(sigma * sigma).unwrap_or(f64::NAN);
    let sigma = bisect(f, 0.1, 1.0, 1e-12)?;
    Ok(CapacityPoint { sigma, p_e: p_fail(sigma * sigma)? })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn anchor_value() {
        let p = p_err_cz(4.44e-3).unwrap();
        assert!((p / 1e-6 - 1.0).abs() < 0.2, "{p}");
        assert!(p_err_cz(1e-6).unwrap() < 1e-300);
    }

    #[test]
    fn dominated_by_the_largest_variance() {
        for var in [2e-3, 3e-3, 4e-3, 5e-3] {
            let p = p_err_cz(var).unwrap();
            let approx = 2.0 * p_fail(7.0 * var).unwrap();
            assert!((p / approx - 1.0).abs() < 0.05, "{var}: {p} vs {approx}");
        }
    }

    #[test]
    fn threshold_solution() {
        let t = solve_threshold(1e-6).unwrap();
        assert!((t.squeezing_db - 20.5).abs() < 0.1, "{t:?}");
        assert!((t.sigma2_star - 4.44e-3).abs() < 0.05e-3, "{t:?}");
        let p = p_err_cz(t.sigma2_star).unwrap();
        assert!((p / 1e-6 - 1.0).abs() < 1e-6);
    }

    #[test]
    fn looser_targets_need_less_squeezing() {
        let mut last = f64::INFINITY;
        for p_ft in [1e-8, 1e-6, 1e-4, 1e-2] {
            let db = solve_threshold(p_ft).unwrap().squeezing_db;
            assert!(db < last);
            last = db;
        }
        assert!(solve_threshold(0.0).is_err());
        assert!(solve_threshold(1.0).is_err());
    }

    #[test]
    fn capacity_edge() {
        let c = capacity_point().unwrap();
        assert!((c.sigma - 0.555).abs() < 0.002, "{c:?}");
        assert!((c.p_e - 0.1100).abs() < 0.0005, "{c:?}");
        assert!((binary_entropy(c.p_e) - 0.5).abs() < 1e-9);
        assert!(capacity_rate(0.09).unwrap() > 0.0);
    }
}
