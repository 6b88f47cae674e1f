//! Reproducibility harness: threshold and capacity solvers, the analog
//! versus binary decoding Monte Carlo, experiment configuration and CSV
//! reports.

mod config;
mod decoding;
mod experiments;
mod report;
mod threshold;

pub use config::{Experiment, ExperimentConfig};
pub use decoding::{analog_decode, analog_vs_binary_mc, audit_against_ml, ml_decode, pattern_decode, DecoderAudit, DecodingResult};
pub use experiments::run_experiment;
pub use report::{Report, Value};
pub use threshold::{capacity_point, capacity_rate, p_err_cz, solve_threshold, CapacityPoint, ThresholdResult};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Independent random stream for trial `trial` under master seed `seed`.
/// Streams depend only on `(seed, trial)`, so results do not depend on how
/// trials are scheduled across threads.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}
