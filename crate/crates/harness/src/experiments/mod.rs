mod bounded;
mod cluster;
pub mod common;
mod cutoff_sweep;
mod ir_table;
mod kms;
mod relations;
mod selection;

use crate::config::{ExperimentKind, RunConfig};
use crate::error::HarnessResult;
use crate::report::ReportRow;

pub fn run(kind: ExperimentKind, cfg: &RunConfig) -> HarnessResult<Vec<ReportRow>> {
    match kind {
        ExperimentKind::VerifyBounded => bounded::run(cfg),
        ExperimentKind::Relations => relations::run(cfg),
        ExperimentKind::Kms => kms::run(cfg),
        ExperimentKind::Cluster => cluster::run(cfg),
        ExperimentKind::IrTable => ir_table::run(cfg),
        ExperimentKind::CutoffSweep => cutoff_sweep::run(cfg),
        ExperimentKind::Selection => selection::run(cfg),
    }
}
