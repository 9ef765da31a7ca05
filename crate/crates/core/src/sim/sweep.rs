use alloc::vec::Vec;

use crate::error::SimError;
use crate::ising::split_field_groups;
use crate::schedule::{assign_offsets, OffsetAssignment, OffsetMode};

use super::hamiltonian::AnnealSpec;
use super::run::{run, RunOptions, RunReport};
use super::DecoherenceConfig;

/// One run of an offset sweep. `magnitude` is the signed offset given to
/// the delayed group.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepJob {
    pub mode: OffsetMode,
    pub magnitude: f64,
}

impl SweepJob {
    pub fn baseline() -> Self {
        Self { mode: OffsetMode::None, magnitude: 0.0 }
    }
}

#[derive(Clone, Debug)]
pub struct SweepRow {
    pub job: SweepJob,
    pub report: RunReport,
}

/// Baseline first, then every mode in the given order, each over the
/// magnitudes in the given order.
pub fn sweep_jobs(magnitudes: &[f64], modes: &[OffsetMode]) -> Vec<SweepJob> {
    let mut jobs = alloc::vec![SweepJob::baseline()];
    for &mode in modes.iter().filter(|m| **m != OffsetMode::None) {
        jobs.extend(magnitudes.iter().map(|&magnitude| SweepJob { mode, magnitude }));
    }
    jobs
}

/// Offsets that `job` applies to the template's problem.
pub fn offsets_for(template: &AnnealSpec, job: &SweepJob) -> Result<OffsetAssignment, SimError> {
    let groups = split_field_groups(template.model());
    Ok(assign_offsets(&groups, job.magnitude, job.mode, false)?)
}

pub fn run_job(
    template: &AnnealSpec,
    job: SweepJob,
    decoherence: &DecoherenceConfig,
    options: &RunOptions,
) -> Result<SweepRow, SimError> {
    let spec = template.with_offsets(offsets_for(template, &job)?)?;
    let report = run(&spec, decoherence, options, &mut [])?;
    Ok(SweepRow { job, report })
}

/// Runs every job of [`sweep_jobs`] in order on the calling thread.
pub fn offset_sweep(
    template: &AnnealSpec,
    magnitudes: &[f64],
    modes: &[OffsetMode],
    decoherence: &DecoherenceConfig,
    options: &RunOptions,
) -> Result<Vec<SweepRow>, SimError> {
    sweep_jobs(magnitudes, modes)
        .into_iter()
        .map(|job| run_job(template, job, decoherence, options))
        .collect()
}
