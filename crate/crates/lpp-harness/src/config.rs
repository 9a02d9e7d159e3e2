//! Experiment catalog and configuration: documented `key = value` text
//! format, per-experiment defaults, and domain validation.

use anyhow::{anyhow, bail, Context, Result};
use lpp::equilibrium::ScalingParams;
use serde::Serialize;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Experiment {
    AiryPath,
    LocalFluct,
    AiryLocal,
    LatticeAiry,
    LatticeLocal,
    VerifyComparison,
    VerifyEquilibrium,
    VerifyExitTail,
    VerifySymmetry,
    VerifyEvent,
    VerifySinks,
    OracleSuite,
}

impl Experiment {
    pub fn name(&self) -> &'static str {
        match self {
            Experiment::AiryPath => "airy_path",
            Experiment::LocalFluct => "local_fluct",
            Experiment::AiryLocal => "airy_local",
            Experiment::LatticeAiry => "lattice_airy",
            Experiment::LatticeLocal => "lattice_local",
            Experiment::VerifyComparison => "verify_comparison",
            Experiment::VerifyEquilibrium => "verify_equilibrium",
            Experiment::VerifyExitTail => "verify_exit_tail",
            Experiment::VerifySymmetry => "verify_symmetry",
            Experiment::VerifyEvent => "verify_event",
            Experiment::VerifySinks => "verify_sinks",
            Experiment::OracleSuite => "oracle_suite",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "airy_path" => Experiment::AiryPath,
            "local_fluct" => Experiment::LocalFluct,
            "airy_local" => Experiment::AiryLocal,
            "lattice_airy" => Experiment::LatticeAiry,
            "lattice_local" => Experiment::LatticeLocal,
            "verify_comparison" => Experiment::VerifyComparison,
            "verify_equilibrium" => Experiment::VerifyEquilibrium,
            "verify_exit_tail" => Experiment::VerifyExitTail,
            "verify_symmetry" => Experiment::VerifySymmetry,
            "verify_event" => Experiment::VerifyEvent,
            "verify_sinks" => Experiment::VerifySinks,
            "oracle_suite" => Experiment::OracleSuite,
            other => bail!("unknown experiment `{other}`"),
        })
    }

    fn is_path_experiment(&self) -> bool {
        matches!(
            self,
            Experiment::AiryPath
                | Experiment::LocalFluct
                | Experiment::AiryLocal
                | Experiment::LatticeAiry
                | Experiment::LatticeLocal
        )
    }
}

/// Scaling regime for the coupling event experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    Tightness,
    LocalFluct,
    LocalAiry,
}

impl EventKind {
    pub fn name(&self) -> &'static str {
        match self {
            EventKind::Tightness => "tightness",
            EventKind::LocalFluct => "local_fluct",
            EventKind::LocalAiry => "local_airy",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "tightness" => EventKind::Tightness,
            "local_fluct" => EventKind::LocalFluct,
            "local_airy" => EventKind::LocalAiry,
            other => bail!("unknown event kind `{other}` (tightness|local_fluct|local_airy)"),
        })
    }
}

/// Evaluation grid `a, b, m`: m points evenly spaced on [a, b].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid {
    pub a: f64,
    pub b: f64,
    pub m: usize,
}

impl Grid {
    pub fn points(&self) -> Vec<f64> {
        if self.m == 1 {
            return vec![self.a];
        }
        (0..self.m)
            .map(|i| self.a + (self.b - self.a) * i as f64 / (self.m - 1) as f64)
            .collect()
    }
}

/// Fully materialized experiment configuration; the JSON summary echoes it
/// verbatim so any run can be replayed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub n: u64,
    pub samples: u64,
    pub master_seed: u64,
    pub grid: Grid,
    pub gamma: f64,
    pub gamma_prime: f64,
    pub s: f64,
    pub lambda: f64,
    pub lambdas: Vec<f64>,
    pub delta: f64,
    pub beta: f64,
    pub epsilon: f64,
    pub epsilons: Vec<f64>,
    pub r_values: Vec<f64>,
    pub kind: EventKind,
    pub t_end: f64,
    pub shift_h: Option<f64>,
    pub window_factor: f64,
    pub max_doublings: u32,
    pub threads: usize,
    pub output_dir: PathBuf,
}

impl ExperimentConfig {
    /// Defaults for one experiment; every field is materialized here.
    pub fn defaults(experiment: Experiment) -> Self {
        let grid = match experiment {
            Experiment::AiryPath | Experiment::LatticeAiry => Grid { a: -1.0, b: 1.0, m: 9 },
            Experiment::LocalFluct | Experiment::LatticeLocal => Grid { a: 0.0, b: 1.0, m: 11 },
            Experiment::AiryLocal => Grid { a: 0.0, b: 1.0, m: 5 },
            _ => Grid { a: 0.0, b: 1.0, m: 5 },
        };
        ExperimentConfig {
            experiment,
            n: 500,
            samples: 100,
            master_seed: 1,
            grid,
            gamma: 0.4,
            gamma_prime: 0.5,
            s: 1.0,
            lambda: match experiment {
                Experiment::VerifyExitTail => 1.0,
                Experiment::VerifySymmetry => 1.25,
                _ => 1.25,
            },
            lambdas: vec![0.5, 1.0, 2.0],
            delta: 0.5,
            beta: 0.5,
            epsilon: 0.1,
            epsilons: vec![0.05, 0.1, 0.2],
            r_values: vec![1.0, 1.5, 2.0],
            kind: EventKind::Tightness,
            t_end: 50.0,
            shift_h: None,
            window_factor: 10.0,
            max_doublings: 6,
            threads: 0,
            output_dir: PathBuf::from("runs"),
        }
    }

    /// Load a config file and finalize it. The file must name the
    /// experiment unless `experiment` is supplied (e.g. by the CLI
    /// subcommand, which then wins).
    pub fn load(path: &Path, experiment: Option<Experiment>) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let pairs = parse_pairs(&text)?;
        let exp = match experiment {
            Some(e) => e,
            None => {
                let (_, v) = pairs
                    .iter()
                    .find(|(k, _)| k == "experiment")
                    .ok_or_else(|| anyhow!("config must set `experiment`"))?;
                Experiment::parse(v)?
            }
        };
        let mut cfg = Self::defaults(exp);
        for (key, value) in &pairs {
            cfg.apply_pair(key, value)
                .with_context(|| format!("config key `{key}`"))?;
        }
        cfg.experiment = exp;
        Ok(cfg)
    }

    /// Apply one `key = value` assignment; unknown keys are errors.
    pub fn apply_pair(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "experiment" => self.experiment = Experiment::parse(value)?,
            "n" => self.n = parse_scalar(value)?,
            "samples" => self.samples = parse_scalar(value)?,
            "master_seed" => self.master_seed = parse_scalar(value)?,
            "grid" => self.grid = parse_grid(value)?,
            "gamma" => self.gamma = parse_scalar(value)?,
            "gamma_prime" => self.gamma_prime = parse_scalar(value)?,
            "s" => self.s = parse_scalar(value)?,
            "lambda" => self.lambda = parse_scalar(value)?,
            "lambdas" => self.lambdas = parse_list(value)?,
            "delta" => self.delta = parse_scalar(value)?,
            "beta" => self.beta = parse_scalar(value)?,
            "epsilon" => self.epsilon = parse_scalar(value)?,
            "epsilons" => self.epsilons = parse_list(value)?,
            "r_values" => self.r_values = parse_list(value)?,
            "kind" => self.kind = EventKind::parse(value)?,
            "t_end" => self.t_end = parse_scalar(value)?,
            "shift_h" => self.shift_h = Some(parse_scalar(value)?),
            "window_factor" => self.window_factor = parse_scalar(value)?,
            "max_doublings" => self.max_doublings = parse_scalar(value)?,
            "threads" => self.threads = parse_scalar(value)?,
            "output_dir" => self.output_dir = PathBuf::from(value),
            other => bail!("unknown key `{other}`"),
        }
        Ok(())
    }

    /// Environment override for the thread count (`LPP_THREADS`); explicit
    /// CLI flags are applied after this and win.
    pub fn apply_env(&mut self) -> Result<()> {
        if let Ok(v) = std::env::var("LPP_THREADS") {
            self.threads = v
                .parse()
                .map_err(|_| anyhow!("LPP_THREADS must be an integer, got `{v}`"))?;
        }
        Ok(())
    }

    /// Scaling parameters for the event experiment at the configured kind.
    pub fn scaling_params(&self) -> ScalingParams {
        self.scaling_params_for(self.n, self.delta, self.epsilon)
    }

    pub fn scaling_params_for(&self, n: u64, delta: f64, epsilon: f64) -> ScalingParams {
        match self.kind {
            EventKind::Tightness => ScalingParams::Tightness { n, beta: self.beta, delta },
            EventKind::LocalFluct => ScalingParams::LocalFluct {
                n,
                gamma: self.gamma,
                gamma_prime: self.gamma_prime,
            },
            EventKind::LocalAiry => ScalingParams::LocalAiry { n, beta: self.beta, epsilon },
        }
    }

    /// Domain validation; error messages name the offending key.
    pub fn validate(&self) -> Result<()> {
        if self.n < 1 {
            bail!("key `n`: must be >= 1");
        }
        if !(self.window_factor > 0.0) {
            bail!("key `window_factor`: must be > 0");
        }
        if !(self.lambda > 0.0) {
            bail!("key `lambda`: must be > 0");
        }
        if self.experiment.is_path_experiment() && self.grid.m < 2 {
            bail!("key `grid`: path experiments need at least 2 grid points");
        }
        if self.grid.m >= 2 && !(self.grid.a < self.grid.b) {
            bail!("key `grid`: need a < b");
        }
        match self.experiment {
            Experiment::LocalFluct | Experiment::LatticeLocal => {
                if !(self.gamma > 0.0 && self.gamma < 2.0 / 3.0) {
                    bail!("key `gamma`: must lie in (0, 2/3)");
                }
                if !(self.s > 0.0) {
                    bail!("key `s`: must be > 0");
                }
                if self.grid.a < 0.0 && self.s * (self.n as f64) + self.grid.a * (self.n as f64).powf(self.gamma) <= 0.0 {
                    bail!("key `grid`: leftmost target abscissa not positive");
                }
            }
            Experiment::AiryPath | Experiment::LatticeAiry => {
                let nf = self.n as f64;
                if nf + 2.0 * self.grid.a * nf.powf(2.0 / 3.0) <= 0.0 {
                    bail!("key `grid`: leftmost target abscissa not positive");
                }
            }
            Experiment::AiryLocal => {
                if self.epsilons.is_empty() {
                    bail!("key `epsilons`: need at least one value");
                }
                for &e in &self.epsilons {
                    if !(e > 0.0 && e < 1.0) {
                        bail!("key `epsilons`: value {e} must lie in (0, 1)");
                    }
                }
                if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
                    bail!("key `epsilon`: must lie in (0, 1)");
                }
                if self.grid.a != 0.0 {
                    bail!("key `grid`: blow-up grid must start at 0");
                }
            }
            Experiment::VerifyEvent => {
                self.scaling_params()
                    .validate()
                    .map_err(|e| anyhow!("event parameters: {e}"))?;
                // the second arm of the trend must stay in-domain too
                self.second_arm_params()
                    .validate()
                    .map_err(|e| anyhow!("event parameters (second arm): {e}"))?;
            }
            Experiment::VerifyEquilibrium | Experiment::VerifySinks => {
                if self.lambdas.is_empty() {
                    bail!("key `lambdas`: need at least one value");
                }
                for &l in &self.lambdas {
                    if !(l > 0.0) {
                        bail!("key `lambdas`: value {l} must be > 0");
                    }
                }
                if !(self.t_end > 0.0) {
                    bail!("key `t_end`: must be > 0");
                }
            }
            Experiment::VerifyExitTail => {
                if self.r_values.len() < 2 {
                    bail!("key `r_values`: need at least two thresholds");
                }
                if self.r_values.windows(2).any(|w| !(w[0] < w[1])) {
                    bail!("key `r_values`: must be strictly increasing");
                }
                if !(self.r_values[0] > 0.0) {
                    bail!("key `r_values`: must be positive");
                }
            }
            Experiment::VerifySymmetry => {
                if let Some(h) = self.shift_h {
                    if !(h > 0.0) {
                        bail!("key `shift_h`: must be > 0");
                    }
                }
            }
            _ => {}
        }
        Ok(())
    }

    /// Trend companion for the event experiment: smaller delta / epsilon,
    /// or four times n for the short-scale regime.
    pub fn second_arm_params(&self) -> ScalingParams {
        match self.kind {
            EventKind::Tightness => self.scaling_params_for(self.n, self.delta / 2.0, self.epsilon),
            EventKind::LocalFluct => self.scaling_params_for(self.n * 4, self.delta, self.epsilon),
            EventKind::LocalAiry => self.scaling_params_for(self.n, self.delta, self.epsilon / 2.0),
        }
    }

    /// Translation shift for the symmetry experiment, defaulting to the
    /// transversal scale n^(2/3).
    pub fn shift(&self) -> f64 {
        self.shift_h.unwrap_or((self.n as f64).powf(2.0 / 3.0))
    }
}

fn parse_pairs(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| anyhow!("line {}: expected `key = value`, got `{raw}`", lineno + 1))?;
        out.push((key.trim().to_string(), value.trim().to_string()));
    }
    Ok(out)
}

fn parse_scalar<T: std::str::FromStr>(value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| anyhow!("cannot parse `{value}`"))
}

fn parse_list(value: &str) -> Result<Vec<f64>> {
    value
        .split(',')
        .map(|p| parse_scalar(p.trim()))
        .collect()
}

fn parse_grid(value: &str) -> Result<Grid> {
    let parts: Vec<&str> = value.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        bail!("grid must be `a,b,m`");
    }
    Ok(Grid {
        a: parse_scalar(parts[0])?,
        b: parse_scalar(parts[1])?,
        m: parse_scalar(parts[2])?,
    })
}
