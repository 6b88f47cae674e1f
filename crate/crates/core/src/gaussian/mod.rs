//! Multimode Gaussian states under Gaussian unitaries, homodyne measurement
//! and Gaussian noise channels.
//!
//! Conventions: ħ = 1, quadratures interleaved as `(q1, p1, q2, p2, ...)`,
//! covariance `Σ_ij = ½⟨{Δx_i, Δx_j}⟩` so the vacuum has `Σ = I/2`.

mod channel;
mod gate;
mod homodyne;
mod io;
mod state;

pub use channel::{
    agn_channel, agn_channel_on, amplification_noise, amplifier_channel, amplify, loss_channel,
    loss_channel_on, loss_variance, rescale_outcomes, sample_agn, AmplificationMode,
};
pub use gate::{apply_gate, make_gate, GateKind, SymplecticGate};
pub use homodyne::{homodyne, homodyne_with_outcome, HomodyneOutcome};
pub use io::{read_state, write_state};
pub use state::{physicality_check, vacuum_state, GaussianState, Physicality, Quadrature};

use nalgebra::DMatrix;

/// Symmetry and symplecticity tolerance.
pub const MATRIX_TOL: f64 = 1e-10;
/// Smallest admissible eigenvalue of `Σ + (i/2)Ω`.
pub const PHYSICALITY_FLOOR: f64 = -1e-10;

/// The symplectic form for `n` modes in interleaved ordering.
pub fn symplectic_form(n_modes: usize) -> DMatrix<f64> {
    let mut omega = DMatrix::zeros(2 * n_modes, 2 * n_modes);
    for k in 0..n_modes {
        omega[(2 * k, 2 * k + 1)] = 1.0;
        omega[(2 * k + 1, 2 * k)] = -1.0;
    }
    omega
}

pub(crate) fn symmetrize(m: &mut DMatrix<f64>) {
    let n = m.nrows();
    for i in 0..n {
        for j in (i + 1)..n {
            let avg = 0.5 * (m[(i, j)] + m[(j, i)]);
            m[(i, j)] = avg;
            m[(j, i)] = avg;
        }
    }
}
