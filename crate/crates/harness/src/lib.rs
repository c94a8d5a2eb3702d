//! Experiment harness: runs one experiment against its oracle and produces a
//! CSV/JSON report.

pub mod config;
pub mod error;
pub mod experiments;
pub mod report;

use config::{ExperimentKind, RunConfig};
use error::HarnessResult;
use report::Report;

/// Validates the configuration and runs the experiment. Nothing is written;
/// on error no partial report exists.
pub fn run_experiment(kind: ExperimentKind, cfg: &RunConfig) -> HarnessResult<Report> {
    vanhove_core::fock::sequential_kernels();
    cfg.validate(kind)?;
    let cfg = match cfg.tolerance {
        Some(t) => cfg.clone().with_tolerance(kind, t),
        None => cfg.clone(),
    };
    let seed = kind.randomized().then(|| cfg.seed());
    let rows = experiments::run(kind, &cfg)?;
    Ok(Report::new(kind.name(), seed, rows))
}
