use super::operators::{interior_norm, matrix_power, FockOperator};
use crate::{Error, Result};

/// Interior-block operator-norm errors of the two product formulas.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrotterErrors {
    /// `‖e^{it(A+B)} − (e^{iAt/2N} e^{iBt/N} e^{iAt/2N})^N‖`.
    pub symmetric: f64,
    /// `‖e^{t²[A,B]} − (e^{iBt/N} e^{iAt/N} e^{−iBt/N} e^{−iAt/N})^{N²}‖`.
    pub commutator: f64,
}

pub fn trotter_product_error(
    a: &FockOperator,
    b: &FockOperator,
    t: f64,
    n_steps: u64,
) -> Result<TrotterErrors> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: b.dim() });
    }
    if n_steps == 0 {
        return Err(Error::invalid("n_steps", "at least one step is required"));
    }
    let n = n_steps as f64;

    let exact = a.add(b)?.expi(t)?;
    let half_a = a.expi(t / (2.0 * n))?;
    let step = &half_a * b.expi(t / n)? * &half_a;
    let symmetric = interior_norm(&(exact - matrix_power(&step, n_steps)));

    // e^{t²[A,B]} = e^{i t² H} with Hermitian H = −i[A,B].
    let h = a.commutator(b)?.scale(num_complex::Complex64::new(0.0, -1.0));
    let exact = h.expi(t * t)?;
    let (ea, eb) = (a.expi(t / n)?, b.expi(t / n)?);
    let (ea_inv, eb_inv) = (a.expi(-t / n)?, b.expi(-t / n)?);
    let step = eb * ea * eb_inv * ea_inv;
    let commutator = interior_norm(&(exact - matrix_power(&step, n_steps * n_steps)));

    Ok(TrotterErrors { symmetric, commutator })
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::invalid("xs", "need at least two paired points"));
    }
    if xs.iter().chain(ys).any(|&v| !(v > 0.0)) {
        return Err(Error::invalid("ys", "log-log fit needs positive values"));
    }
    let lx: Vec<f64> = xs.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|v| v.ln()).collect();
    let k = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / k, ly.iter().sum::<f64>() / k);
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    Ok(sxy / sxx)
}
