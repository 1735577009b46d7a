//! Experiment configuration, grid runs, and result files.

pub mod config;
pub mod record;
pub mod runners;
pub mod selftest;

pub use config::{ExperimentConfig, Format, Grid, Task, DEFAULT_TIMEOUT_S, SCHEMA_VERSION};
pub use record::{csv_header, emit, params, render, ExperimentRecord, Param, Params, Validity};
pub use runners::{run, RunSummary};
pub use selftest::{selftest, CheckResult};

use crate::error::{Error, Result};

/// Environment variable capping the worker pool.
pub const THREADS_ENV: &str = "CQI_THREADS";

/// Size the global worker pool from `CQI_THREADS` when it is set. Returns
/// the thread count that was requested.
pub fn init_threads() -> Result<Option<usize>> {
    let Ok(raw) = std::env::var(THREADS_ENV) else { return Ok(None) };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::Config(format!("{THREADS_ENV}={raw} is not a positive integer")))?;
    // A pool that was already built keeps its size.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(Some(n))
}
