//! Offset sweeps fanned out over a worker pool.

use qanneal_core::sim::{run_job, AnnealSpec, DecoherenceConfig, RunOptions, SweepJob, SweepRow};
use qanneal_core::SimError;
use rayon::prelude::*;

/// Environment variable that caps the number of sweep workers.
pub const WORKERS_ENV: &str = "QANNEAL_WORKERS";

pub fn worker_count() -> usize {
    std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(rayon::current_num_threads)
}

/// Runs `jobs` on `workers` threads; rows come back in job order.
pub fn parallel_sweep(
    template: &AnnealSpec,
    jobs: &[SweepJob],
    decoherence: &DecoherenceConfig,
    options: &RunOptions,
    workers: usize,
) -> Result<Vec<SweepRow>, SimError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .expect("thread pool");
    pool.install(|| jobs.par_iter().map(|&job| run_job(template, job, decoherence, options)).collect())
}
