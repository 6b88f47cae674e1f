//! Scalar special functions and root finding shared across modules.

use crate::{Error, Result};

pub const SQRT_PI: f64 = 1.772_453_850_905_516;

/// Density of N(0, var) at `x`.
pub fn gaussian_density(x: f64, var: f64) -> f64 {
    (-x * x / (2.0 * var)).exp() / (2.0 * std::f64::consts::PI * var).sqrt()
}

/// P(X > x) for X ~ N(0, var), accurate deep into the tail.
pub fn normal_sf(x: f64, var: f64) -> f64 {
    0.5 * libm::erfc(x / (2.0 * var).sqrt())
}

/// P(a <= X <= b) for X ~ N(0, var).
///
/// Intervals on one side of the origin are evaluated as a difference of upper
/// tails so that far-away lattice bins keep their relative precision.
pub fn normal_interval(a: f64, b: f64, var: f64) -> f64 {
    debug_assert!(a <= b);
    if a >= 0.0 {
        normal_sf(a, var) - normal_sf(b, var)
    } else if b <= 0.0 {
        normal_sf(-b, var) - normal_sf(-a, var)
    } else {
        1.0 - normal_sf(-a, var) - normal_sf(b, var)
    }
}

/// Binary entropy in bits.
pub fn binary_entropy(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        return 0.0;
    }
    -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
}

/// Bisection for a root of `f` on `[lo, hi]`, where `f(lo)` and `f(hi)` have
/// opposite signs. Stops when the bracket is narrower than `rel_tol * |mid|`.
pub fn bisect<F>(mut f: F, mut lo: f64, mut hi: f64, rel_tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if !(f_lo.is_finite() && f_hi.is_finite()) || f_lo * f_hi > 0.0 {
        return Err(Error::Numerical(format!(
            "root not bracketed on [{lo:e}, {hi:e}] (f = {f_lo:e}, {f_hi:e})"
        )));
    }
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if (hi - lo) <= rel_tol * mid.abs() {
            return Ok(mid);
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::Numerical("bisection did not converge".into()))
}

/// Wilson score interval for `successes` out of `trials` at `z` standard deviations.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_matches_complement_near_centre() {
        let var = 0.3;
        let inside = normal_interval(-0.4, 0.7, var);
        let outside = normal_sf(0.7, var) + normal_sf(0.4, var);
        assert!((inside + outside - 1.0).abs() < 1e-15);
    }

    #[test]
    fn far_tail_keeps_relative_precision() {
        // Upper tail of N(0,1) beyond 10: 7.619853024160527e-24.
        let tail = normal_interval(10.0, f64::INFINITY, 1.0);
        assert!((tail / 7.619_853_024_160_527e-24 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn entropy_half_root() {
        let p = bisect(|p| binary_entropy(p) - 0.5, 1e-6, 0.5, 1e-12).unwrap();
        assert!((p - 0.110_027_864_438_360_35).abs() < 1e-10);
    }

    #[test]
    fn bisect_rejects_unbracketed() {
        assert!(bisect(|x| x * x + 1.0, -1.0, 1.0, 1e-9).is_err());
    }

    #[test]
    fn wilson_contains_estimate() {
        let (lo, hi) = wilson_interval(30, 1000, 1.96);
        assert!(lo < 0.03 && 0.03 < hi);
        let (lo0, _) = wilson_interval(0, 1000, 1.96);
        assert_eq!(lo0, 0.0);
    }
}
