use num_complex::Complex64;
use std::f64::consts::FRAC_1_SQRT_2;

use super::{approx_gkp, GkpShape, Grid, GridWavefunction, GridWavefunction2};
use crate::special::SQRT_PI;
use crate::{Error, Result};

/// `S(r)(|α⟩ + |−α⟩)` for real `α`: two peaks at `±√2·α·e^{−r}` with
/// position variance `½e^{−2r}`.
pub fn squeezed_cat(alpha: f64, r: f64, grid: Grid) -> Result<GridWavefunction> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::invalid("alpha", format!("{alpha} is not positive")));
    }
    if !r.is_finite() {
        return Err(Error::invalid("r", "squeezing is not finite"));
    }
    let a = std::f64::consts::SQRT_2 * alpha * (-r).exp();
    let v = 0.5 * (-2.0 * r).exp();
    GridWavefunction::from_fn(grid, |x| {
        let g = |c: f64| (-(x - c) * (x - c) / (4.0 * v)).exp();
        Complex64::new(g(a) + g(-a), 0.0)
    })
    .normalized()
}

/// Number of local maxima of `|ψ|²` exceeding 10% of its maximum.
pub fn count_peaks(psi: &GridWavefunction) -> usize {
    let p = psi.probabilities();
    let top = p.iter().cloned().fold(0.0, f64::max);
    (1..p.len() - 1)
        .filter(|&i| p[i] > p[i - 1] && p[i] >= p[i + 1] && p[i] > 0.1 * top)
        .count()
}

/// Number of Simpson intervals across the acceptance window.
const WINDOW_INTERVALS: usize = 20;

/// One breeding step: two copies of `psi` meet on a balanced beam splitter
/// and the second output is measured in momentum. Outcomes with
/// `|p| ≤ epsilon` are kept. Returns the first mode conditioned on `p = 0`
/// (the window centre) and the acceptance probability.
pub fn breed_once(psi: &GridWavefunction, epsilon: f64) -> Result<(GridWavefunction, f64)> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::invalid("epsilon", format!("{epsilon} is not a positive window")));
    }
    let grid = *psi.grid();
    let psi = psi.clone().normalized()?;
    let joint = GridWavefunction2::from_fn(grid, |x1, x2| {
        psi.interpolate((x1 - x2) * FRAC_1_SQRT_2) * psi.interpolate((x1 + x2) * FRAC_1_SQRT_2)
    });

    let h = 2.0 * epsilon / WINDOW_INTERVALS as f64;
    let mut acceptance = 0.0;
    for k in 0..=WINDOW_INTERVALS {
        let w = if k == 0 || k == WINDOW_INTERVALS {
            1.0
        } else if k % 2 == 1 {
            4.0
        } else {
            2.0
        };
        acceptance += w * joint.project_second_momentum(-epsilon + k as f64 * h).norm_sq();
    }
    acceptance *= h / 3.0;

    let out = joint.project_second_momentum(0.0).normalized()?;
    Ok((out, acceptance))
}

#[derive(Clone, Debug, PartialEq)]
pub struct BreedingResult {
    /// State after the last round.
    pub state: GridWavefunction,
    /// Acceptance probability of each round.
    pub acceptance: Vec<f64>,
    /// Fidelity with the fitted approximate GKP `|0⟩` after each round.
    pub fidelity: Vec<f64>,
    /// Peak count after each round.
    pub peaks: Vec<usize>,
    /// Lattice spacing of the final state.
    pub spacing: f64,
}

/// Runs `rounds` breeding steps starting from a squeezed cat.
///
/// After round `k` the peaks sit on a lattice of spacing `2a·2^{−k/2}`. The
/// comparison codeword is the GKP `|0⟩` rescaled to that lattice, with peak
/// width fixed by the squeezing and envelope `κ` fitted to the state's
/// second moment.
pub fn breeding_round(alpha: f64, r: f64, rounds: usize, epsilon: f64, grid: Grid) -> Result<BreedingResult> {
    let mut state = squeezed_cat(alpha, r, grid)?;
    let a = std::f64::consts::SQRT_2 * alpha * (-r).exp();
    let v = 0.5 * (-2.0 * r).exp();
    let mut result = BreedingResult {
        state: state.clone(),
        acceptance: Vec::with_capacity(rounds),
        fidelity: Vec::with_capacity(rounds),
        peaks: Vec::with_capacity(rounds),
        spacing: 2.0 * a,
    };
    for k in 1..=rounds {
        let (next, p) = breed_once(&state, epsilon)?;
        state = next;
        let spacing = 2.0 * a * 2f64.powf(-(k as f64) / 2.0);
        result.acceptance.push(p);
        result.peaks.push(count_peaks(&state));
        result.fidelity.push(fitted_fidelity(&state, spacing, v)?);
        result.spacing = spacing;
    }
    result.state = state;
    Ok(result)
}

fn fitted_fidelity(state: &GridWavefunction, spacing: f64, peak_var: f64) -> Result<f64> {
    let scale = spacing / (2.0 * SQRT_PI);
    // |ψ|² peaks have variance v; amplitude peaks e^{−u²/(2δ²)} need δ² = 2v.
    let delta2 = 2.0 * peak_var / (scale * scale);
    let envelope = state.moment_q(2) / (scale * scale) - 0.5 * delta2;
    if !(envelope > 0.0) {
        return Err(Error::Numerical("state narrower than a single peak; envelope fit failed".into()));
    }
    let shape = GkpShape::new(delta2, 1.0 / (2.0 * envelope), scale)?;
    approx_gkp(*state.grid(), shape, 0)?.fidelity(state)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cat_has_two_peaks() {
        let cat = squeezed_cat(2.0, 1.0, Grid::standard()).unwrap();
        assert_eq!(count_peaks(&cat), 2);
        let a = 2f64.sqrt() * 2.0 * (-1.0f64).exp();
        let v = 0.5 * (-2.0f64).exp();
        // the overlap term e^{−a²/2v} carries a centred Gaussian of variance v
        let o = (-a * a / (2.0 * v)).exp();
        let want = (a * a + v + o * v) / (1.0 + o);
        assert!((cat.moment_q(2) - want).abs() < 1e-10);
    }

    #[test]
    fn zero_rounds_return_the_cat() {
        let g = Grid::standard();
        let res = breeding_round(2.0, 1.0, 0, 0.05, g).unwrap();
        assert_eq!(res.state, squeezed_cat(2.0, 1.0, g).unwrap());
        assert!(res.fidelity.is_empty());
    }

    #[test]
    fn one_round_gives_three_peaks() {
        let res = breeding_round(2.0, 1.0, 1, 0.05, Grid::standard()).unwrap();
        assert_eq!(res.peaks, vec![3]);
        assert!(res.acceptance[0] > 0.0 && res.acceptance[0] < 1.0);
        assert!((res.state.norm_sq() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn bred_state_matches_self_convolution() {
        // Projecting the second port on p = 0 leaves
        // ψ_out(x) ∝ ∫ ψ(u) ψ(√2·x − u) du.
        let g = Grid::standard();
        let cat = squeezed_cat(2.0, 1.0, g).unwrap();
        let (out, _) = breed_once(&cat, 0.05).unwrap();
        let oracle = GridWavefunction::from_fn(g, |x| {
            g.xs()
                .map(|u| cat.interpolate(u) * cat.interpolate(std::f64::consts::SQRT_2 * x - u))
                .sum::<Complex64>()
        })
        .normalized()
        .unwrap();
        assert!((out.fidelity(&oracle).unwrap() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn acceptance_grows_with_window() {
        let cat = squeezed_cat(2.0, 1.0, Grid::standard()).unwrap();
        let (_, narrow) = breed_once(&cat, 0.05).unwrap();
        let (_, wide) = breed_once(&cat, 0.2).unwrap();
        assert!(wide > narrow);
        assert!(breed_once(&cat, 0.0).is_err());
    }
}
