//! Acceptance suite: one test per criterion, each printing a pass/fail
//! line (run with `-- --nocapture` to see them in passing runs).
//!
//! Every tolerance is pinned here or in the experiment gates; nothing is
//! deferred to later calibration. The suite drives the same experiment
//! implementations as the CLI.

use lpp_harness::config::{EventKind, Experiment, ExperimentConfig, Grid};
use lpp_harness::output::RunSummary;
use lpp_harness::run_experiment;
use std::time::Instant;

fn base(experiment: Experiment, dir: &tempfile::TempDir) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::defaults(experiment);
    cfg.output_dir = dir.path().to_path_buf();
    cfg.master_seed = 1;
    cfg
}

fn gate_report(summary: &RunSummary) -> (bool, String) {
    let mut ok = true;
    let mut failures = Vec::new();
    for g in &summary.gates {
        if !g.passed {
            ok = false;
            failures.push(format!(
                "{} (statistic {:?} vs threshold {:?})",
                g.name, g.statistic, g.threshold
            ));
        }
    }
    (ok, failures.join("; "))
}

fn finish(criterion: &str, started: Instant, ok: bool, detail: String) {
    println!(
        "criterion {criterion}: {} [{}s]{}",
        if ok { "PASS" } else { "FAIL" },
        started.elapsed().as_secs(),
        if detail.is_empty() { String::new() } else { format!(" - {detail}") }
    );
    assert!(ok, "criterion {criterion} failed: {detail}");
}

#[test]
fn criterion_01_local_comparison_audit() {
    let started = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let mut ok = true;
    let mut detail = Vec::new();
    for (n, samples) in [(100u64, 10_000u64), (300, 1_000)] {
        for lambda in [0.8, 1.25] {
            let mut cfg = base(Experiment::VerifyComparison, &dir);
            cfg.n = n;
            cfg.samples = samples;
            cfg.lambda = lambda;
            cfg.grid = Grid { a: 0.0, b: 1.0, m: 5 };
            cfg.output_dir = dir.path().join(format!("c1_n{n}_l{lambda}"));
            let summary = run_experiment(&cfg).expect("comparison run");
            let (run_ok, failures) = gate_report(&summary);
            let violations = summary.metrics["violations"];
            detail.push(format!("n={n} lambda={lambda}: violations={violations}"));
            if !run_ok {
                ok = false;
                detail.push(failures);
            }
        }
    }
    finish("01 local comparison", started, ok, detail.join("; "));
}

#[test]
fn criterion_02_oracle_equivalence() {
    let started = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = base(Experiment::OracleSuite, &dir);
    cfg.samples = 10_000; // patience-vs-enumeration cases; other suites run samples/10
    let summary = run_experiment(&cfg).expect("oracle run");
    let (ok, failures) = gate_report(&summary);
    finish(
        "02 oracle equivalence",
        started,
        ok,
        if ok {
            format!(
                "lis={} lattice={} evolve={} sup={} cases all matched",
                summary.metrics["lis_cases"],
                summary.metrics["lattice_cases"],
                summary.metrics["evolve_cases"],
                summary.metrics["sup_cases"]
            )
        } else {
            failures
        },
    );
}

#[test]
fn criterion_03_law_of_large_numbers_centering() {
    let started = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let mut ok = true;
    let mut detail = Vec::new();
    for experiment in [Experiment::AiryPath, Experiment::LatticeAiry] {
        let mut cfg = base(experiment, &dir);
        cfg.n = 2000;
        cfg.samples = 50;
        cfg.grid = Grid { a: 0.0, b: 1.0, m: 2 };
        cfg.output_dir = dir.path().join(experiment.name());
        let summary = run_experiment(&cfg).expect("centering run");
        let gate = summary
            .gates
            .iter()
            .find(|g| g.name == "centering_lln")
            .expect("centering gate");
        detail.push(format!(
            "{}: |mean/ref - 1| = {:.5}",
            experiment.name(),
            gate.statistic.unwrap()
        ));
        ok &= gate.passed;
    }
    finish("03 centering", started, ok, detail.join("; "));
}

#[test]
fn criterion_04_local_fluctuations() {
    let started = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let mut ok = true;
    let mut detail = Vec::new();
    for experiment in [Experiment::LocalFluct, Experiment::LatticeLocal] {
        let mut cfg = base(experiment, &dir);
        cfg.n = 1000;
        cfg.samples = 2000;
        cfg.gamma = 0.4;
        cfg.s = 1.0;
        cfg.grid = Grid { a: 0.0, b: 1.0, m: 5 };
        cfg.output_dir = dir.path().join(experiment.name());
        let summary = run_experiment(&cfg).expect("local fluctuation run");
        let (run_ok, failures) = gate_report(&summary);
        if !run_ok {
            ok = false;
            detail.push(format!("{}: {failures}", experiment.name()));
        }
    }
    finish("04 local fluctuations", started, ok, detail.join("; "));
}

#[test]
fn criterion_05_exit_point_tail() {
    let started = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = base(Experiment::VerifyExitTail, &dir);
    cfg.n = 500;
    cfg.samples = 5000;
    cfg.lambda = 1.0;
    cfg.r_values = vec![1.0, 1.5, 2.0];
    let summary = run_experiment(&cfg).expect("exit tail run");
    let (ok, failures) = gate_report(&summary);
    let detail = if ok {
        format!(
            "p(1)={:.4} p(1.5)={:.4} p(2)={:.4} slope={:.2}",
            summary.metrics["exit_tail_p[r=1]"],
            summary.metrics["exit_tail_p[r=1.5]"],
            summary.metrics["exit_tail_p[r=2]"],
            summary.metrics["exit_tail_slope"],
        )
    } else {
        failures
    };
    finish("05 exit tail", started, ok, detail);
}

#[test]
fn criterion_06_equilibrium_and_sinks() {
    let started = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = base(Experiment::VerifyEquilibrium, &dir);
    cfg.lambdas = vec![0.5, 1.0, 2.0];
    cfg.t_end = 50.0;
    cfg.samples = 25;
    let summary = run_experiment(&cfg).expect("equilibrium run");
    let (mut ok, mut detail) = gate_report(&summary);
    for lambda in ["0.5", "1", "2"] {
        let count = summary.metrics[&format!("spacing_count[lambda={lambda}]")];
        if count < 10_000.0 {
            ok = false;
            detail.push_str(&format!(" pooled spacings at lambda={lambda} only {count}"));
        }
    }

    let mut cfg = base(Experiment::VerifySinks, &dir);
    cfg.output_dir = dir.path().join("sinks");
    cfg.lambdas = vec![0.5, 1.0, 2.0];
    cfg.t_end = 50.0;
    cfg.samples = 200;
    let sinks = run_experiment(&cfg).expect("sink run");
    let (sink_ok, sink_fail) = gate_report(&sinks);
    if !sink_ok {
        ok = false;
        detail.push_str(&sink_fail);
    }
    finish("06 equilibrium invariance and sink law", started, ok, detail);
}

#[test]
fn criterion_07_symmetries() {
    let started = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = base(Experiment::VerifySymmetry, &dir);
    cfg.n = 200;
    cfg.samples = 5000;
    cfg.lambda = 1.25;
    let summary = run_experiment(&cfg).expect("symmetry run");
    let (ok, failures) = gate_report(&summary);
    let detail = if ok {
        format!(
            "translation p={:.3} scaling p={:.3} reflection |dp|={:.4}",
            summary.metrics["translation_ks_p"],
            summary.metrics["scaling_ks_p"],
            (summary.metrics["diagonal_p_left_negative"]
                - summary.metrics["diagonal_p_right_positive"])
                .abs(),
        )
    } else {
        failures
    };
    finish("07 symmetries", started, ok, detail);
}

#[test]
fn criterion_08_local_airy_variance() {
    let started = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = base(Experiment::AiryLocal, &dir);
    cfg.n = 2000;
    cfg.samples = 3000;
    cfg.epsilons = vec![0.1];
    cfg.epsilon = 0.1;
    cfg.grid = Grid { a: 0.0, b: 1.0, m: 5 };
    let summary = run_experiment(&cfg).expect("blow-up run");
    let (ok, failures) = gate_report(&summary);
    let detail = if ok {
        format!("Var at u=1: {:.3} (band [1.2, 2.8])", summary.metrics["blowup_var_at_1[eps=0.1]"])
    } else {
        failures
    };
    finish("08 blow-up variance", started, ok, detail);
}

#[test]
fn criterion_09_modulus_tightness_proxy() {
    let started = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let mut ok = true;
    let mut detail = Vec::new();
    let mut trend: Vec<(u64, f64, f64)> = Vec::new();
    for n in [500u64, 1000, 2000] {
        let mut cfg = base(Experiment::AiryPath, &dir);
        cfg.n = n;
        cfg.samples = 1000;
        cfg.grid = Grid { a: 0.0, b: 1.0, m: 21 };
        cfg.output_dir = dir.path().join(format!("n{n}"));
        let summary = run_experiment(&cfg).expect("modulus run");
        let p05 = summary.metrics["modulus_p_delta005"];
        let p10 = summary.metrics["modulus_p_delta010"];
        let se = summary.metrics["modulus_se_delta005"];
        if p05 > p10 {
            ok = false;
            detail.push(format!("n={n}: p(0.05)={p05} exceeds p(0.1)={p10}"));
        }
        trend.push((n, p05, se));
        detail.push(format!("n={n}: p(0.05)={p05:.3} p(0.1)={p10:.3}"));
    }
    for w in trend.windows(2) {
        let (n0, p0, se0) = w[0];
        let (n1, p1, se1) = w[1];
        let slack = 2.0 * (se0 * se0 + se1 * se1).sqrt();
        if p1 > p0 + slack {
            ok = false;
            detail.push(format!(
                "exceedance probability increased from n={n0} ({p0}) to n={n1} ({p1}) beyond {slack}"
            ));
        }
    }
    finish("09 modulus proxy", started, ok, detail.join("; "));
}

#[test]
fn criterion_10_event_probability_trends() {
    let started = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let mut ok = true;
    let mut detail = Vec::new();

    let mut cfg = base(Experiment::VerifyEvent, &dir);
    cfg.kind = EventKind::Tightness;
    cfg.n = 500;
    cfg.beta = 0.5;
    cfg.delta = 0.5; // second arm runs delta/2 = 0.25
    cfg.samples = 1000;
    cfg.output_dir = dir.path().join("tightness");
    let summary = run_experiment(&cfg).expect("tightness event run");
    let (run_ok, failures) = gate_report(&summary);
    detail.push(format!(
        "delta 0.5 -> 0.25: {:.4} -> {:.4}",
        summary.metrics["event_complement_p[arm=0]"],
        summary.metrics["event_complement_p[arm=1]"]
    ));
    if !run_ok {
        ok = false;
        detail.push(failures);
    }

    let mut cfg = base(Experiment::VerifyEvent, &dir);
    cfg.kind = EventKind::LocalFluct;
    cfg.n = 500; // second arm runs 4n = 2000
    cfg.gamma = 0.4;
    cfg.gamma_prime = 0.5;
    cfg.samples = 600;
    cfg.output_dir = dir.path().join("local_fluct");
    let summary = run_experiment(&cfg).expect("short-scale event run");
    let (run_ok, failures) = gate_report(&summary);
    detail.push(format!(
        "n 500 -> 2000: {:.4} -> {:.4}",
        summary.metrics["event_complement_p[arm=0]"],
        summary.metrics["event_complement_p[arm=1]"]
    ));
    if !run_ok {
        ok = false;
        detail.push(failures);
    }
    finish("10 event probability trends", started, ok, detail.join("; "));
}

#[test]
fn criterion_11_reproducibility() {
    let started = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let mut csvs: Vec<Vec<u8>> = Vec::new();
    let mut payloads: Vec<serde_json::Value> = Vec::new();
    for (label, threads) in [("a", 2usize), ("b", 2), ("c", 1), ("d", 8)] {
        let mut cfg = base(Experiment::VerifyComparison, &dir);
        cfg.n = 50;
        cfg.samples = 60;
        cfg.lambda = 1.25;
        cfg.threads = threads;
        cfg.output_dir = dir.path().join(label);
        run_experiment(&cfg).expect("reproducibility run");
        csvs.push(std::fs::read(cfg.output_dir.join("verify_comparison.csv")).unwrap());
        let mut json: serde_json::Value = serde_json::from_slice(
            &std::fs::read(cfg.output_dir.join("verify_comparison_summary.json")).unwrap(),
        )
        .unwrap();
        // wall clock, timestamp and thread count live only in `meta`; the
        // rest of the summary is part of the determinism contract
        json.as_object_mut().unwrap().remove("meta");
        json.as_object_mut()
            .unwrap()
            .get_mut("config")
            .unwrap()
            .as_object_mut()
            .unwrap()
            .remove("threads");
        json.as_object_mut()
            .unwrap()
            .get_mut("config")
            .unwrap()
            .as_object_mut()
            .unwrap()
            .remove("output_dir");
        payloads.push(json);
    }
    let identical_rerun = csvs[0] == csvs[1] && payloads[0] == payloads[1];
    let thread_invariant = csvs[0] == csvs[2]
        && csvs[0] == csvs[3]
        && payloads[0] == payloads[2]
        && payloads[0] == payloads[3];
    finish(
        "11 reproducibility",
        started,
        identical_rerun && thread_invariant,
        format!("identical rerun: {identical_rerun}; threads 1/2/8 identical: {thread_invariant}"),
    );
}
