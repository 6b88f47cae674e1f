use num_complex::Complex64;

use super::{Grid, GridWavefunction};
use crate::{Error, Result};

/// How the homodyne outcome on the resource mode is chosen.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum OutcomeChoice {
    /// The grid point of largest outcome density.
    MostLikely,
    /// The grid point nearest to the given value.
    Fixed(f64),
    /// Inverse-CDF sample for a uniform variate `u ∈ [0, 1)`.
    InverseCdf(f64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct CubicTeleport {
    /// Corrected, normalized output state for the chosen outcome.
    pub output: GridWavefunction,
    pub outcome: f64,
    /// Outcome probability density at `outcome`.
    pub outcome_density: f64,
    /// Fidelity of `output` with `e^{iγx³/3}|input⟩`.
    pub fidelity: f64,
    /// Outcome-averaged fidelity `∫ P(m) F(m) dm`.
    pub average_fidelity: f64,
}

/// Gate teleportation of `e^{iγx³/3}` with a finitely squeezed resource.
///
/// The resource is `e^{iγy³/3}` applied to a p-squeezed vacuum whose
/// position variance is `½·10^{dB/10}`; it is evaluated in closed form so
/// that outcomes far outside the input grid are accounted for. The coupling
/// `y → y + x` followed by
/// a position measurement `y = m` leaves `e^{iγ(x+m)³/3}` on the input up to
/// the resource envelope; the feedforward `e^{−iγ(m x² + m² x)}` removes the
/// outcome-dependent shear and displacement.
pub fn cubic_phase_teleport(
    input: &GridWavefunction,
    gamma: f64,
    resource_db: f64,
    choice: OutcomeChoice,
) -> Result<CubicTeleport> {
    let grid = *input.grid();
    if !gamma.is_finite() || !resource_db.is_finite() {
        return Err(Error::invalid("gamma", "parameters must be finite"));
    }
    let l = grid.max_abs_x();
    if grid.dx * gamma.abs() * l * l > std::f64::consts::FRAC_PI_2 {
        return Err(Error::Resolution(format!(
            "dx·|γ|·L² = {:.3} exceeds π/2; the cubic phase is aliased",
            grid.dx * gamma.abs() * l * l
        )));
    }
    let input = input.clone().normalized()?;

    let var_q = 0.5 * 10f64.powf(resource_db / 10.0);
    let resource = |y: f64| Complex64::from_polar((-y * y / (4.0 * var_q)).exp(), gamma * y * y * y / 3.0);
    // Outcomes are spread over var_q + ⟨x²⟩; cover eight standard deviations.
    let spread = (var_q + input.moment_q(2)).sqrt();
    let outcomes = Grid::symmetric((8.0 * spread).max(l), grid.dx)?;

    let target = input.clone().with_phase(|x| gamma * x * x * x / 3.0);
    // State of the input mode after the resource is found at y = m, before
    // feedforward: ψ(x)·R(x + m).
    let slice = |m: f64| -> GridWavefunction {
        let amps = (0..grid.n).map(|i| input.amps()[i] * resource(grid.x(i) + m)).collect();
        GridWavefunction::new(grid, amps).expect("amplitudes match the grid")
    };
    let corrected = |m: f64| -> Result<GridWavefunction> {
        slice(m).with_phase(|x| -gamma * (m * x * x + m * m * x)).normalized()
    };

    let density: Vec<f64> = outcomes.xs().map(|m| slice(m).norm_sq()).collect();
    let total: f64 = density.iter().sum();
    let mut average = 0.0;
    for (j, &p) in density.iter().enumerate() {
        if p > 1e-300 * total {
            average += p * target.fidelity(&corrected(outcomes.x(j))?)?;
        }
    }
    let average_fidelity = average / total;

    let j = match choice {
        OutcomeChoice::MostLikely => density
            .iter()
            .enumerate()
            .fold(0, |best, (j, &p)| if p > density[best] { j } else { best }),
        OutcomeChoice::Fixed(m) => {
            let f = ((m - outcomes.x0) / outcomes.dx).round();
            if !(f >= 0.0 && f < outcomes.n as f64) {
                return Err(Error::invalid("outcome", format!("{m} is outside the outcome range")));
            }
            f as usize
        }
        OutcomeChoice::InverseCdf(u) => {
            if !(0.0..1.0).contains(&u) {
                return Err(Error::invalid("u", format!("{u} outside [0, 1)")));
            }
            let goal = u * total;
            let mut acc = 0.0;
            density
                .iter()
                .position(|&p| {
                    acc += p;
                    acc > goal
                })
                .unwrap_or(outcomes.n - 1)
        }
    };
    let m = outcomes.x(j);
    let output = corrected(m)?;
    let fidelity = target.fidelity(&output)?;
    Ok(CubicTeleport {
        output,
        outcome: m,
        outcome_density: density[j] / (total * outcomes.dx),
        fidelity,
        average_fidelity,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    
    fn coherent(q: f64) -> GridWavefunction {
        GridWavefunction::from_fn(Grid::standard(), |x| Complex64::new((-(x - q) * (x - q) / 2.0).exp(), 0.0))
            .normalized()
            .unwrap()
    }

    #[test]
    fn zero_nonlinearity_teleports_the_input() {
        let t = cubic_phase_teleport(&coherent(0.0), 0.0, 15.0, OutcomeChoice::MostLikely).unwrap();
        assert_eq!(t.outcome, 0.0);
        assert!(t.fidelity >= 0.999, "{}", t.fidelity);
        assert!((t.output.norm_sq() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn weak_cubic_gate_on_vacuum() {
        let t = cubic_phase_teleport(&coherent(0.0), 0.1, 20.0, OutcomeChoice::MostLikely).unwrap();
        assert!(t.fidelity >= 0.99 && t.average_fidelity >= 0.99, "{t:?}");
    }

    #[test]
    fn fidelity_grows_with_resource_squeezing() {
        let mut last = 0.0;
        for db in [5.0, 10.0, 15.0, 20.0] {
            let t = cubic_phase_teleport(&coherent(0.0), 0.1, db, OutcomeChoice::MostLikely).unwrap();
            assert!(t.average_fidelity >= last && t.fidelity >= t.average_fidelity);
            last = t.average_fidelity;
        }
    }

    #[test]
    fn momentum_shift_follows_the_heisenberg_map() {
        let (q0, gamma) = (1.0, 0.1);
        let input = coherent(q0);
        let t = cubic_phase_teleport(&input, gamma, 20.0, OutcomeChoice::MostLikely).unwrap();
        // p → p + γq²: ⟨p⟩ grows by γ(q0² + ½)
        let want = input.mean_p() + gamma * (q0 * q0 + 0.5);
        assert!((t.output.mean_p() - want).abs() < 1e-2, "{} vs {want}", t.output.mean_p());
    }

    #[test]
    fn outcome_choices() {
        let input = coherent(0.3);
        let fixed = cubic_phase_teleport(&input, 0.1, 15.0, OutcomeChoice::Fixed(1.0)).unwrap();
        assert!((fixed.outcome - 1.0).abs() < 1e-12);
        let lo = cubic_phase_teleport(&input, 0.1, 15.0, OutcomeChoice::InverseCdf(0.1)).unwrap();
        let hi = cubic_phase_teleport(&input, 0.1, 15.0, OutcomeChoice::InverseCdf(0.9)).unwrap();
        assert!(lo.outcome < hi.outcome);
        assert!(cubic_phase_teleport(&input, 0.1, 15.0, OutcomeChoice::InverseCdf(1.0)).is_err());
    }

    #[test]
    fn coarse_grid_is_rejected() {
        assert!(matches!(
            cubic_phase_teleport(&coherent(0.0), 1.0, 15.0, OutcomeChoice::MostLikely),
            Err(Error::Resolution(_))
        ));
    }
}
