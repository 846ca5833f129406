//! Experiment configs, recipes, the run pipeline and the acceptance checks behind the `invset` binary.

pub mod config;
pub mod error;
pub mod recipes;
pub mod run;
pub mod verify;

pub use config::ExperimentConfig;
pub use error::{CliError, Result};
pub use run::{run, RunReport};
pub use verify::{verify_all, CriterionResult, Level};

/// Sizes the global worker pool from `INVSET_THREADS`, if set.
pub fn init_threads() {
    if let Some(n) = std::env::var("INVSET_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}
