use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::special::{gaussian_density, normal_interval, SQRT_PI};
use crate::{Error, Result};

/// Lattice-sum terms below this magnitude are dropped.
const TERM_FLOOR: f64 = 1e-18;

fn check_var(var: f64) -> Result<()> {
    if var > 0.0 && var.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid("var", format!("{var} is not a positive finite variance")))
    }
}

/// Probability that a Gaussian peak of variance `σ²` lands outside the
/// central bin `[−√π/2, √π/2]`.
pub fn p_fail(var: f64) -> Result<f64> {
    check_var(var)?;
    Ok(libm::erfc(SQRT_PI / (2.0 * (2.0 * var).sqrt())))
}

/// Exact bit-flip probability of a binned measurement: the mass of
/// `N(0, σ²)` in all odd-parity bins.
pub fn lattice_flip_probability(var: f64) -> Result<f64> {
    Ok(hrm_stats(var, 0.0)?.p_err_and_accept)
}

/// Acceptance and error statistics of a highly reliable measurement that
/// keeps only outcomes with `|Δm| ≤ √π/2 − ζ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HrmStats {
    pub p_accept: f64,
    pub p_err_and_accept: f64,
    pub p_err_given_accept: f64,
}

pub fn hrm_stats(var: f64, zeta: f64) -> Result<HrmStats> {
    check_var(var)?;
    let half = 0.5 * SQRT_PI;
    if !(0.0..half).contains(&zeta) {
        return Err(Error::invalid("zeta", format!("{zeta} outside [0, √π/2)")));
    }
    let w = half - zeta;
    let window = |k: i64| {
        let c = k as f64 * SQRT_PI;
        normal_interval(c - w, c + w, var)
    };
    // Sum outward from k = 0 until both tails drop below the floor.
    let (mut p_accept, mut p_err_and_accept) = (window(0), 0.0);
    for k in 1i64.. {
        let (a, b) = (window(k), window(-k));
        p_accept += a + b;
        if k % 2 == 1 {
            p_err_and_accept += a + b;
        }
        if a < TERM_FLOOR && b < TERM_FLOOR {
            break;
        }
    }
    Ok(HrmStats {
        p_accept,
        p_err_and_accept,
        p_err_given_accept: p_err_and_accept / p_accept,
    })
}

/// One post-selected measurement on a peak centred at zero: `None` if the
/// outcome is discarded, otherwise whether the bit was misidentified.
pub fn hrm_sample<R: Rng + ?Sized>(var: f64, zeta: f64, rng: &mut R) -> Result<Option<bool>> {
    check_var(var)?;
    let half = 0.5 * SQRT_PI;
    if !(0.0..half).contains(&zeta) {
        return Err(Error::invalid("zeta", format!("{zeta} outside [0, √π/2)")));
    }
    let x = Normal::new(0.0, var.sqrt())
        .map_err(|e| Error::Numerical(e.to_string()))?
        .sample(rng);
    let b = super::bin_outcome(x, SQRT_PI)?;
    Ok((b.deviation.abs() <= half - zeta).then_some(b.bit == 1))
}

/// Likelihoods of "no flip" and "flip" given a bin deviation `Δm`.
pub fn analog_likelihoods(deviation: f64, var: f64) -> Result<(f64, f64)> {
    check_var(var)?;
    let d = deviation.abs();
    if !(d <= 0.5 * SQRT_PI) {
        return Err(Error::invalid("deviation", format!("|{deviation}| exceeds √π/2")));
    }
    Ok((gaussian_density(d, var), gaussian_density(SQRT_PI - d, var)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn capacity_edge_anchor() {
        let p = p_fail(0.555 * 0.555).unwrap();
        assert!((p - 0.110).abs() < 1e-3, "{p}");
    }

    #[test]
    fn matches_quadrature_oracle() {
        // 40-digit adaptive quadrature of the central-bin complement
        let p = p_fail(0.04).unwrap();
        assert!((p / 9.373_853_928_926_265e-6 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn vanishes_without_noise() {
        assert!(p_fail(1e-6).unwrap() < 1e-300);
        assert!(p_fail(0.0).is_err());
        assert!(p_fail(-1.0).is_err());
    }

    #[test]
    fn lattice_sum_agrees_with_central_bin_for_small_noise() {
        for sigma in [0.05, 0.1, 0.15, 0.2] {
            let var: f64 = sigma * sigma;
            let a = lattice_flip_probability(var).unwrap();
            let b = p_fail(var).unwrap();
            assert!((a - b).abs() < 1e-12, "sigma {sigma}");
        }
        let exact = lattice_flip_probability(0.04).unwrap();
        assert!((exact / 9.373_853_928_926_265e-6 - 1.0).abs() < 1e-9);
    }

    #[test]
    fn hrm_without_window_is_plain_measurement() {
        let h = hrm_stats(0.09, 0.0).unwrap();
        assert!((h.p_accept - 1.0).abs() < 1e-14);
        assert!((h.p_err_given_accept - lattice_flip_probability(0.09).unwrap()).abs() < 1e-16);
    }

    #[test]
    fn hrm_oracle_values() {
        let h = hrm_stats(0.09, 0.4).unwrap();
        assert!((h.p_accept - 0.894_948_187_156_887_2).abs() < 1e-13);
        assert!((h.p_err_given_accept / 2.019_757_314_226_828_9e-5 - 1.0).abs() < 1e-9);
    }

    #[test]
    fn hrm_monotone_in_window() {
        let mut last = hrm_stats(0.09, 0.0).unwrap();
        for i in 1..20 {
            let h = hrm_stats(0.09, 0.04 * i as f64).unwrap();
            assert!(h.p_accept < last.p_accept);
            assert!(h.p_err_given_accept < last.p_err_given_accept);
            last = h;
        }
        assert!(hrm_stats(0.09, 0.5 * SQRT_PI).is_err());
    }

    #[test]
    fn hrm_sampling_matches_integrals() {
        let (var, zeta) = (0.09, 0.2);
        let h = hrm_stats(var, zeta).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let n = 2_000_000u64;
        let (mut acc, mut err) = (0u64, 0u64);
        for _ in 0..n {
            if let Some(flip) = hrm_sample(var, zeta, &mut rng).unwrap() {
                acc += 1;
                err += u64::from(flip);
            }
        }
        let pa = acc as f64 / n as f64;
        let se = (h.p_accept * (1.0 - h.p_accept) / n as f64).sqrt();
        assert!((pa - h.p_accept).abs() < 4.0 * se);
        let pe = err as f64 / n as f64;
        let se = (h.p_err_and_accept / n as f64).sqrt();
        assert!((pe - h.p_err_and_accept).abs() < 4.0 * se);
    }

    #[test]
    fn analog_likelihood_values() {
        let (l0, l1) = analog_likelihoods(0.5, 0.16).unwrap();
        assert!((l0 - 0.456_622_713_472_554_8).abs() < 1e-15);
        assert!((l1 - 0.006_329_990_398_075_658).abs() < 1e-16);
        let (a, b) = analog_likelihoods(0.5 * SQRT_PI, 0.16).unwrap();
        assert!((a - b).abs() < 1e-15 * a);
        let (c, d) = analog_likelihoods(0.0, 0.16).unwrap();
        assert_eq!(c, gaussian_density(0.0, 0.16));
        assert_eq!(d, gaussian_density(SQRT_PI, 0.16));
        assert!(analog_likelihoods(0.9, 0.16).is_err());
    }

    proptest! {
        #[test]
        fn p_fail_monotone(a in 1e-4..2.0f64, b in 1e-4..2.0f64) {
            prop_assume!((a - b).abs() > 1e-9);
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            prop_assert!(p_fail(lo).unwrap() < p_fail(hi).unwrap());
        }

        #[test]
        fn analog_decision_switches_at_the_boundary(d in -0.886..0.886f64, var in 0.01..1.0f64) {
            let (l0, l1) = analog_likelihoods(d, var).unwrap();
            prop_assert_eq!(l0, analog_likelihoods(-d, var).unwrap().0);
            if d.abs() < 0.5 * SQRT_PI - 1e-9 {
                prop_assert!(l0 > l1);
            }
        }
    }
}
