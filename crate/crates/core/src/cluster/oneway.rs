use nalgebra::DMatrix;
use rand::Rng;

use crate::gaussian::{homodyne, homodyne_with_outcome, make_gate, GateKind, GaussianState, SymplecticGate};
use crate::{Error, Result};

fn check_bases(bases: &[f64]) -> Result<()> {
    if !matches!(bases.len(), 1 | 4) {
        return Err(Error::invalid(
            "bases",
            format!("{} measurements; supported lengths are 1 and 4", bases.len()),
        ));
    }
    if bases.iter().any(|m| !m.is_finite()) {
        return Err(Error::invalid("bases", "non-finite basis parameter"));
    }
    Ok(())
}

/// The single-mode map an ideal cluster implements for `bases`. Each
/// measurement of `p + m q` contributes `F·P(m)` with `F = R(π/2)` and
/// `P(m)` the shear `p → p + m q`, so `(1, 0, 0, 0)` gives `F⁴P(1) = P(1)`.
pub fn oneway_target(bases: &[f64]) -> Result<SymplecticGate> {
    check_bases(bases)?;
    let mut g = SymplecticGate::identity(1);
    for &m in bases {
        g = make_gate(GateKind::Phase(m), &[0], 1)?.compose(&g)?;
        g = make_gate(GateKind::Rotate(std::f64::consts::FRAC_PI_2), &[0], 1)?.compose(&g)?;
    }
    Ok(g)
}

/// Teleports a one-mode `input` along a linear cluster of `bases.len()`
/// p-squeezed modes at squeezing `r`. Mode 0 is measured in `p + m_i q`
/// and the outcome `s` is fed forward as `q → q − s` on the next mode and
/// `p → p − s` on the one after it.
pub fn oneway_gate<R: Rng + ?Sized>(
    input: &GaussianState,
    bases: &[f64],
    r: f64,
    rng: &mut R,
) -> Result<GaussianState> {
    check_inputs(input, bases, r)?;
    let mut state = prepare(input, bases.len(), r)?;
    for &m in bases {
        let (phi, scale) = basis_angle(m);
        let out = homodyne(&state, 0, phi, rng)?;
        state = feed_forward(out.conditioned, out.value * scale)?;
    }
    Ok(state)
}

/// The outcome-averaged map of [`oneway_gate`]: the feedforward is linear
/// in each outcome, so averaging over outcomes adds `Var(s)·b bᵀ` to the
/// conditioned covariance, with `b` the mean's sensitivity to `s`.
pub fn oneway_channel(input: &GaussianState, bases: &[f64], r: f64) -> Result<GaussianState> {
    check_inputs(input, bases, r)?;
    let mut state = prepare(input, bases.len(), r)?;
    for &m in bases {
        let (phi, scale) = basis_angle(m);
        let at = |v: f64| -> Result<GaussianState> {
            feed_forward(homodyne_with_outcome(&state, 0, phi, v)?.conditioned, v * scale)
        };
        let probe = homodyne_with_outcome(&state, 0, phi, 0.0)?;
        let (mu, var) = (probe.marginal_mean, probe.marginal_var);
        let centre = at(mu)?;
        let slope = at(mu + 1.0)?.mean() - centre.mean();
        let cov = centre.cov() + &slope * slope.transpose() * var;
        state = GaussianState::new(centre.mean().clone(), cov)?;
    }
    Ok(state)
}

fn check_inputs(input: &GaussianState, bases: &[f64], r: f64) -> Result<()> {
    check_bases(bases)?;
    if input.n_modes() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, found: input.n_modes() });
    }
    if !(r >= 0.0 && r.is_finite()) {
        return Err(Error::invalid("r", format!("{r} is not a finite non-negative squeezing")));
    }
    Ok(())
}

/// Input followed by `len` p-squeezed modes, chained by CZ gates.
fn prepare(input: &GaussianState, len: usize, r: f64) -> Result<GaussianState> {
    let mut state = input.clone();
    for _ in 0..len {
        state = state.tensor(&GaussianState::squeezed_vacuum(-r));
    }
    for k in 0..len {
        state = state.apply(GateKind::Cz, &[k, k + 1])?;
    }
    Ok(state)
}

/// Homodyne angle measuring `p + m q`, and the factor turning its outcome
/// into a value of `p + m q`.
fn basis_angle(m: f64) -> (f64, f64) {
    (1f64.atan2(m), m.hypot(1.0))
}

fn feed_forward(conditioned: Option<GaussianState>, s: f64) -> Result<GaussianState> {
    let next = conditioned.ok_or_else(|| Error::Numerical("cluster exhausted before the last measurement".into()))?;
    let mut shift = nalgebra::DVector::zeros(next.mean().len());
    shift[0] = -s;
    if next.n_modes() > 1 {
        shift[3] = -s;
    }
    next.displaced(&shift)
}

/// Largest deviation between the first and second moments of `output` and
/// the target map applied to `input`.
pub fn oneway_moment_error(input: &GaussianState, output: &GaussianState, target: &SymplecticGate) -> Result<f64> {
    let want = crate::gaussian::apply_gate(input, target)?;
    let dm = (want.mean() - output.mean()).amax();
    let dc: DMatrix<f64> = want.cov() - output.cov();
    Ok(dm.max(dc.amax()))
}
