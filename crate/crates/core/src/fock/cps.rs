use nalgebra::DVector;
use num_complex::Complex64;

use super::{Grid, GridWavefunction};
use crate::{Error, Result};

/// Weak cubic phase state `|0⟩ + c|3⟩` with `c = iγ√3/2`, normalized, in a
/// number basis of `dim` levels.
pub fn cps_approx_state(gamma: f64, dim: usize) -> Result<DVector<Complex64>> {
    if !(gamma.abs() < 1.0) {
        return Err(Error::invalid("gamma", format!("|{gamma}| >= 1")));
    }
    if dim < 4 {
        return Err(Error::invalid("dim", format!("{dim} < 4")));
    }
    let c = Complex64::new(0.0, gamma * 3f64.sqrt() / 2.0);
    let norm = (1.0 + c.norm_sqr()).sqrt();
    let mut v = DVector::zeros(dim);
    v[0] = Complex64::new(1.0 / norm, 0.0);
    v[3] = c / norm;
    Ok(v)
}

/// Unnormalized `e^{−x²/2}(1 + iγ(x³ − 3x/2))` with the vacuum's prefactor.
pub fn cps_wavefunction(gamma: f64, x: f64) -> Complex64 {
    let g = std::f64::consts::PI.powf(-0.25) * (-0.5 * x * x).exp();
    Complex64::new(g, g * gamma * (x * x * x - 1.5 * x))
}

/// Harmonic-oscillator eigenfunctions `ψ_0..ψ_{n−1}` at `x`, by the stable
/// three-term recurrence.
pub fn hermite_functions(n: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n);
    if n == 0 {
        return out;
    }
    out.push(std::f64::consts::PI.powf(-0.25) * (-0.5 * x * x).exp());
    if n > 1 {
        out.push(std::f64::consts::SQRT_2 * x * out[0]);
    }
    for k in 1..n.saturating_sub(1) {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * x * out[k] - (kf / (kf + 1.0)).sqrt() * out[k - 1];
        out.push(next);
    }
    out
}

/// Position representation of a number-basis state.
pub fn fock_to_grid(coeffs: &DVector<Complex64>, grid: Grid) -> GridWavefunction {
    GridWavefunction::from_fn(grid, |x| {
        hermite_functions(coeffs.len(), x)
            .iter()
            .zip(coeffs.iter())
            .map(|(h, c)| c * *h)
            .sum()
    })
}
