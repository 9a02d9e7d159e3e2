//! Persistence: one CSV of per-sample values and one JSON summary per run.
//!
//! CSV schema: header `experiment,n,sample_id,u,value,kind`; floats carry
//! 17 significant digits so round-trips are lossless and reruns are
//! byte-identical. Wall-clock and timestamps live only in the JSON `meta`
//! block, which is excluded from the determinism contract.

use crate::config::ExperimentConfig;
use anyhow::{Context, Result};
use lpp::stats::SampleSummary;
use serde::Serialize;
use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

/// One CSV row.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub sample_id: u64,
    pub u: f64,
    pub value: f64,
    pub kind: String,
}

/// A pass/fail acceptance gate with its observed statistic.
#[derive(Debug, Clone, Serialize)]
pub struct Gate {
    pub name: String,
    pub passed: bool,
    pub statistic: Option<f64>,
    pub threshold: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Gate {
    pub fn new(name: impl Into<String>, passed: bool, statistic: f64, threshold: f64) -> Self {
        Gate {
            name: name.into(),
            passed,
            statistic: Some(statistic),
            threshold: Some(threshold),
            note: None,
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn no_data(name: impl Into<String>) -> Self {
        Gate {
            name: name.into(),
            passed: false,
            statistic: None,
            threshold: None,
            note: Some("no data".into()),
        }
    }
}

/// Summary of the sampled values of one (kind, u) cell.
#[derive(Debug, Clone, Serialize)]
pub struct CellSummary {
    pub kind: String,
    pub u: f64,
    pub count: usize,
    pub mean: f64,
    pub variance: f64,
    pub std_error_of_mean: f64,
    pub min: f64,
    pub max: f64,
}

impl CellSummary {
    pub fn new(kind: impl Into<String>, u: f64, s: &SampleSummary) -> Self {
        CellSummary {
            kind: kind.into(),
            u,
            count: s.count,
            mean: s.mean,
            variance: s.variance,
            std_error_of_mean: s.std_error_of_mean,
            min: s.min,
            max: s.max,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SeedRecord {
    pub master_seed: u64,
    pub stream_index_scheme: String,
    pub substreams: Vec<&'static str>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Meta {
    pub wall_clock_ms: u128,
    pub version: &'static str,
    pub timestamp_unix: u64,
    pub threads: usize,
}

/// Everything a run reports; serialized as the JSON summary.
#[derive(Debug, Clone, Serialize)]
pub struct RunSummary {
    pub config: ExperimentConfig,
    pub gates: Vec<Gate>,
    pub summaries: Vec<CellSummary>,
    pub metrics: BTreeMap<String, f64>,
    pub seeds: SeedRecord,
    pub flagged_samples: u64,
    pub csv_rows: u64,
    pub meta: Meta,
}

impl RunSummary {
    pub fn all_gates_passed(&self) -> bool {
        !self.gates.is_empty() && self.gates.iter().all(|g| g.passed)
    }
}

/// 17 significant digits, enough for a lossless f64 round-trip.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_csv(path: &Path, experiment: &str, n: u64, rows: &[Row]) -> Result<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let file = std::fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
    let mut w = std::io::BufWriter::new(file);
    writeln!(w, "experiment,n,sample_id,u,value,kind")?;
    for r in rows {
        writeln!(
            w,
            "{experiment},{n},{},{},{},{}",
            r.sample_id,
            fmt_f64(r.u),
            fmt_f64(r.value),
            r.kind
        )?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_summary(path: &Path, summary: &RunSummary) -> Result<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let mut text = serde_json::to_string_pretty(summary).context("serializing summary")?;
    text.push('\n');
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

pub fn csv_path(cfg: &ExperimentConfig) -> PathBuf {
    cfg.output_dir.join(format!("{}.csv", cfg.experiment.name()))
}

pub fn summary_path(cfg: &ExperimentConfig) -> PathBuf {
    cfg.output_dir.join(format!("{}_summary.json", cfg.experiment.name()))
}
