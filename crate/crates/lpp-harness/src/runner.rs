//! Parallel Monte Carlo engine: work-stealing over sample indices, with
//! aggregation in deterministic sample order so every numeric output is
//! independent of the thread count.

use crate::config::ExperimentConfig;
use crate::experiments;
use crate::output::{
    csv_path, summary_path, write_csv, write_summary, CellSummary, Gate, Meta, Row, RunSummary,
    SeedRecord,
};
use anyhow::{Context, Result};
use lpp::stats::SampleSummary;
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::time::Instant;

/// Stream-index stride between experiment arms; sample ids stay below it.
pub const ARM_STRIDE: u64 = 1 << 32;

/// What one experiment produces before persistence.
#[derive(Debug, Default)]
pub struct Outcome {
    pub rows: Vec<Row>,
    pub gates: Vec<Gate>,
    pub summaries: Vec<CellSummary>,
    pub metrics: BTreeMap<String, f64>,
    pub flagged: u64,
}

impl Outcome {
    pub fn metric(&mut self, name: impl Into<String>, value: f64) {
        self.metrics.insert(name.into(), value);
    }
}

/// A per-sample result: either a value or a flag for a sample whose window
/// could not be certified within the doubling budget.
pub enum PerSample<T> {
    Value(T),
    Flagged,
}

/// Convert a core-library error into a flag (window inadequacy) or a fatal
/// error (anything else).
pub fn flag_window<T>(r: lpp::Result<T>) -> Result<PerSample<T>> {
    match r {
        Ok(v) => Ok(PerSample::Value(v)),
        Err(lpp::Error::WindowInadequate { .. }) => Ok(PerSample::Flagged),
        Err(e) => Err(e).context("sample evaluation failed"),
    }
}

/// Run `samples` independent sample computations in parallel, collecting
/// results in sample-index order.
pub fn par_samples<T: Send>(
    samples: u64,
    f: impl Fn(u64) -> Result<T> + Sync + Send,
) -> Result<Vec<T>> {
    (0..samples).into_par_iter().map(f).collect()
}

/// Split flagged samples out of a per-sample result vector.
pub fn partition_flags<T>(results: Vec<PerSample<T>>) -> (Vec<T>, u64) {
    let mut values = Vec::with_capacity(results.len());
    let mut flagged = 0;
    for r in results {
        match r {
            PerSample::Value(v) => values.push(v),
            PerSample::Flagged => flagged += 1,
        }
    }
    (values, flagged)
}

/// Fraction of flagged samples tolerated before the run fails.
pub const FLAGGED_TOLERANCE: f64 = 0.001;

pub fn flagged_gate(flagged: u64, samples: u64) -> Gate {
    let frac = if samples == 0 { 0.0 } else { flagged as f64 / samples as f64 };
    Gate::new("flagged_fraction", frac <= FLAGGED_TOLERANCE, frac, FLAGGED_TOLERANCE)
}

pub fn summarize(kind: &str, u: f64, values: &[f64]) -> Result<CellSummary> {
    let s = SampleSummary::from_slice(values).context("summarizing cell")?;
    Ok(CellSummary::new(kind, u, &s))
}

/// Execute one experiment: validate, run in a dedicated thread pool, write
/// the CSV and JSON summary, and return the summary.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<RunSummary> {
    cfg.validate()?;
    let started = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .context("building thread pool")?;
    let outcome = pool.install(|| dispatch(cfg))?;
    let summary = RunSummary {
        config: cfg.clone(),
        gates: outcome.gates,
        summaries: outcome.summaries,
        metrics: outcome.metrics,
        seeds: SeedRecord {
            master_seed: cfg.master_seed,
            stream_index_scheme:
                "stream_index = arm * 2^32 + sample_id; paired boundaries use arm * 2^32 + 2*sample_id (+1)"
                    .into(),
            substreams: vec!["bulk", "boundary", "bulk_extension", "boundary_extension", "lattice"],
        },
        flagged_samples: outcome.flagged,
        csv_rows: outcome.rows.len() as u64,
        meta: Meta {
            wall_clock_ms: started.elapsed().as_millis(),
            version: env!("CARGO_PKG_VERSION"),
            timestamp_unix: std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
            threads: pool.current_num_threads(),
        },
    };
    write_csv(&csv_path(cfg), cfg.experiment.name(), cfg.n, &outcome.rows)?;
    write_summary(&summary_path(cfg), &summary)?;
    Ok(summary)
}

fn dispatch(cfg: &ExperimentConfig) -> Result<Outcome> {
    use crate::config::Experiment::*;
    if cfg.samples == 0 {
        let mut out = Outcome::default();
        out.gates.push(Gate::no_data(format!("{}_gates", cfg.experiment.name())));
        return Ok(out);
    }
    match cfg.experiment {
        AiryPath => experiments::airy_path(cfg),
        LocalFluct => experiments::local_fluct(cfg),
        AiryLocal => experiments::airy_local(cfg),
        LatticeAiry => experiments::lattice_airy(cfg),
        LatticeLocal => experiments::lattice_local(cfg),
        VerifyComparison => experiments::verify_comparison(cfg),
        VerifyEquilibrium => experiments::verify_equilibrium(cfg),
        VerifyExitTail => experiments::verify_exit_tail(cfg),
        VerifySymmetry => experiments::verify_symmetry(cfg),
        VerifyEvent => experiments::verify_event(cfg),
        VerifySinks => experiments::verify_sinks(cfg),
        OracleSuite => experiments::oracle_suite(cfg),
    }
}
