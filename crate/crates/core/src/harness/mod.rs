//! Simulation harness: test densities, integrated squared error, Monte Carlo
//! experiments and CSV persistence.

mod experiment;
mod io;
mod ise;
mod targets;

pub use experiment::{
    misspecification_ratio, run_experiment, run_experiment_detailed, workers_from_env,
    ExperimentReport, ExperimentSpec, SummaryStats, DEFAULT_GRID_POINTS, MAX_FAILURE_FRACTION,
};
pub use io::{
    estimate_csv, read_data, results_csv, score_curve_csv, write_results, write_text,
    RESULTS_HEADER,
};
pub use ise::{ise, ise_on_grid, uniform_grid};
pub use targets::{sample_noise, TargetDensity};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Random stream of replication `r` under `seed`; streams never overlap.
pub fn replication_rng(seed: u64, r: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(r);
    rng
}
