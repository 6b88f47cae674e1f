//! Non-Gaussian content: truncated number-basis operators, product-formula
//! and commutator identities, the cubic phase state and gate, breeding of
//! squeezed cats and approximate GKP states on a position grid.

mod breeding;
mod cps;
mod cubic;
mod gkp_state;
mod grid;
mod identities;
mod operators;
mod trotter;

pub use breeding::{breed_once, breeding_round, count_peaks, squeezed_cat, BreedingResult};
pub use cps::{cps_approx_state, cps_wavefunction, fock_to_grid, hermite_functions};
pub use cubic::{cubic_phase_teleport, CubicTeleport, OutcomeChoice};
pub use gkp_state::{approx_gkp, gkp_overlap, GkpShape};
pub use grid::{read_grid, write_grid, Grid, GridWavefunction, GridWavefunction2};
pub use identities::{commutator_identity_check, IdentityResiduals};
pub use operators::{interior_dim, interior_norm, quadrature_matrices, quadrature_matrices_hbar, FockOperator};
pub use trotter::{loglog_slope, trotter_product_error, TrotterErrors};
