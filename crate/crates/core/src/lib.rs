//! Simulation toolkit for continuous-variable optical quantum computation.
//!
//! The crate is split along the physics:
//!
//! * [`gaussian`]: multimode Gaussian states (mean vector and covariance, ħ = 1,
//!   vacuum variance 1/2), symplectic gates, homodyne conditioning and the
//!   loss / additive-Gaussian-noise channels.
//! * [`gkp`]: the GKP qubit reduced to per-quadrature peak variances, with
//!   binning, misidentification probabilities, single-qubit-level error
//!   correction, post-selected measurement and analog likelihoods.
//! * [`cluster`]: CV cluster states, nullifiers, the time-multiplexed 1D chain
//!   and one-way gates driven by homodyne measurement.
//! * [`fock`]: truncated number-basis operators and position-grid
//!   wavefunctions for the non-Gaussian pieces (product formulas, cubic phase
//!   gate teleportation, breeding of GKP states).
//! * [`bench`]: threshold and capacity solvers, the analog-vs-binary decoding
//!   Monte Carlo, and the experiment runner behind the `cvgkp` CLI.

// Negated comparisons below are deliberate: they reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bench;
pub mod cluster;
pub mod error;
pub mod fock;
pub mod gaussian;
pub mod gkp;
pub mod special;

pub use error::{Error, Result};
