use anyhow::Result;
use clap::{Args, Parser, Subcommand};
use lpp_harness::config::{EventKind, Experiment, ExperimentConfig};
use lpp_harness::output::{csv_path, summary_path};
use lpp_harness::{describe, run_experiment, RunSummary};
use std::path::PathBuf;
use std::process::ExitCode;

/// Monte Carlo simulator and verification harness for planar and lattice
/// last-passage percolation.
#[derive(Parser)]
#[command(name = "lpp", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a path-simulation experiment.
    Simulate {
        #[command(subcommand)]
        which: SimulateCmd,
    },
    /// Run a verification audit.
    Verify {
        #[command(subcommand)]
        which: VerifyCmd,
    },
    /// Run the exhaustive small-instance equivalence suites.
    Oracle(CommonArgs),
    /// Print the experiment catalog, output formats and exit codes.
    Describe,
}

#[derive(Subcommand)]
enum SimulateCmd {
    /// Rescaled passage profile at the transversal scale.
    Airy(CommonArgs),
    /// Short-scale increment process.
    Local(CommonArgs),
    /// Blow-up of the rescaled profile around the origin.
    AiryLocal(CommonArgs),
    /// Lattice analog of the rescaled profile.
    LatticeAiry(CommonArgs),
    /// Lattice analog of the short-scale increments.
    LatticeLocal(CommonArgs),
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Pathwise local-comparison audit (must hold exactly).
    Comparison(CommonArgs),
    /// Invariance of the equilibrium particle law.
    Equilibrium(CommonArgs),
    /// Exit-point tail decay.
    ExitTail(CommonArgs),
    /// Translation / scaling / reflection symmetries of exit points.
    Symmetry(CommonArgs),
    /// Coupling-event probability trends.
    Event(CommonArgs),
    /// Counting law at the origin.
    Sinks(CommonArgs),
}

#[derive(Args, Default)]
struct CommonArgs {
    /// Config file in key = value format; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    samples: Option<u64>,
    #[arg(long)]
    master_seed: Option<u64>,
    /// Evaluation grid as `a,b,m`.
    #[arg(long)]
    grid: Option<String>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    gamma_prime: Option<f64>,
    #[arg(long)]
    s: Option<f64>,
    #[arg(long)]
    lambda: Option<f64>,
    /// Comma-separated intensity list (equilibrium and sink audits).
    #[arg(long)]
    lambdas: Option<String>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    /// Comma-separated epsilon list (blow-up experiment).
    #[arg(long)]
    epsilons: Option<String>,
    /// Comma-separated tail thresholds.
    #[arg(long)]
    r_values: Option<String>,
    /// Event regime: tightness | local_fluct | local_airy.
    #[arg(long)]
    kind: Option<String>,
    #[arg(long)]
    t_end: Option<f64>,
    /// Translation shift for the symmetry audit (default n^(2/3)).
    #[arg(long)]
    shift_h: Option<f64>,
    #[arg(long)]
    window_factor: Option<f64>,
    #[arg(long)]
    max_doublings: Option<u32>,
    /// Worker threads (0 = all available; LPP_THREADS overrides config).
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    output_dir: Option<PathBuf>,
}

impl CommonArgs {
    fn into_config(self, experiment: Experiment) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::load(path, Some(experiment))?,
            None => ExperimentConfig::defaults(experiment),
        };
        cfg.apply_env()?;
        if let Some(v) = self.n {
            cfg.n = v;
        }
        if let Some(v) = self.samples {
            cfg.samples = v;
        }
        if let Some(v) = self.master_seed {
            cfg.master_seed = v;
        }
        if let Some(v) = &self.grid {
            cfg.apply_pair("grid", v)?;
        }
        if let Some(v) = self.gamma {
            cfg.gamma = v;
        }
        if let Some(v) = self.gamma_prime {
            cfg.gamma_prime = v;
        }
        if let Some(v) = self.s {
            cfg.s = v;
        }
        if let Some(v) = self.lambda {
            cfg.lambda = v;
        }
        if let Some(v) = &self.lambdas {
            cfg.apply_pair("lambdas", v)?;
        }
        if let Some(v) = self.delta {
            cfg.delta = v;
        }
        if let Some(v) = self.beta {
            cfg.beta = v;
        }
        if let Some(v) = self.epsilon {
            cfg.epsilon = v;
        }
        if let Some(v) = &self.epsilons {
            cfg.apply_pair("epsilons", v)?;
        }
        if let Some(v) = &self.r_values {
            cfg.apply_pair("r_values", v)?;
        }
        if let Some(v) = &self.kind {
            cfg.kind = EventKind::parse(v)?;
        }
        if let Some(v) = self.t_end {
            cfg.t_end = v;
        }
        if let Some(v) = self.shift_h {
            cfg.shift_h = Some(v);
        }
        if let Some(v) = self.window_factor {
            cfg.window_factor = v;
        }
        if let Some(v) = self.max_doublings {
            cfg.max_doublings = v;
        }
        if let Some(v) = self.threads {
            cfg.threads = v;
        }
        if let Some(v) = self.output_dir {
            cfg.output_dir = v;
        }
        Ok(cfg)
    }
}

fn report(summary: &RunSummary) {
    for g in &summary.gates {
        let status = if g.passed { "PASS" } else { "FAIL" };
        let stat = g
            .statistic
            .map(|s| format!(" statistic={s:.6}"))
            .unwrap_or_default();
        let thr = g
            .threshold
            .map(|t| format!(" threshold={t:.6}"))
            .unwrap_or_default();
        let note = g.note.as_deref().map(|n| format!(" ({n})")).unwrap_or_default();
        println!("gate {}: {status}{stat}{thr}{note}", g.name);
    }
    if let Some(v) = summary.metrics.get("violations") {
        println!("violations: {}", *v as u64);
    }
    if summary.flagged_samples > 0 {
        println!("flagged samples: {}", summary.flagged_samples);
    }
    println!("csv:     {}", csv_path(&summary.config).display());
    println!("summary: {}", summary_path(&summary.config).display());
}

fn execute(experiment: Experiment, args: CommonArgs) -> ExitCode {
    let cfg = match args.into_config(experiment) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    match run_experiment(&cfg) {
        Ok(summary) => {
            report(&summary);
            if summary.all_gates_passed() {
                ExitCode::SUCCESS
            } else {
                println!("result: FAIL");
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Simulate { which } => match which {
            SimulateCmd::Airy(a) => execute(Experiment::AiryPath, a),
            SimulateCmd::Local(a) => execute(Experiment::LocalFluct, a),
            SimulateCmd::AiryLocal(a) => execute(Experiment::AiryLocal, a),
            SimulateCmd::LatticeAiry(a) => execute(Experiment::LatticeAiry, a),
            SimulateCmd::LatticeLocal(a) => execute(Experiment::LatticeLocal, a),
        },
        Command::Verify { which } => match which {
            VerifyCmd::Comparison(a) => execute(Experiment::VerifyComparison, a),
            VerifyCmd::Equilibrium(a) => execute(Experiment::VerifyEquilibrium, a),
            VerifyCmd::ExitTail(a) => execute(Experiment::VerifyExitTail, a),
            VerifyCmd::Symmetry(a) => execute(Experiment::VerifySymmetry, a),
            VerifyCmd::Event(a) => execute(Experiment::VerifyEvent, a),
            VerifyCmd::Sinks(a) => execute(Experiment::VerifySinks, a),
        },
        Command::Oracle(a) => execute(Experiment::OracleSuite, a),
        Command::Describe => {
            print!("{}", describe::render());
            ExitCode::SUCCESS
        }
    }
}
