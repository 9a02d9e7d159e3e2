//! CLI surface tests: subcommands, exit codes, config handling, and the
//! byte-level determinism contract of the outputs.

use std::path::Path;
use std::process::Command;

fn lpp() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lpp"))
}

fn read(path: &Path) -> Vec<u8> {
    std::fs::read(path).unwrap_or_else(|e| panic!("reading {}: {e}", path.display()))
}

#[test]
fn describe_lists_every_experiment() {
    let out = lpp().arg("describe").output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for name in [
        "airy_path",
        "local_fluct",
        "airy_local",
        "lattice_airy",
        "lattice_local",
        "verify_comparison",
        "verify_equilibrium",
        "verify_exit_tail",
        "verify_symmetry",
        "verify_event",
        "verify_sinks",
        "oracle_suite",
    ] {
        assert!(text.contains(name), "describe misses {name}");
    }
    assert!(text.contains("exit codes"));
}

#[test]
fn unknown_flag_is_usage_error() {
    let out = lpp().args(["verify", "comparison", "--no-such-flag"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_config_key_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    std::fs::write(&cfg, "experiment = airy_path\nwhatever = 1\n").unwrap();
    let out = lpp()
        .args(["simulate", "airy", "--config"])
        .arg(&cfg)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("whatever"), "error must name the key: {err}");
}

#[test]
fn domain_violation_is_usage_error() {
    let out = lpp()
        .args(["simulate", "local", "--gamma", "0.7", "--n", "50", "--samples", "5"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("gamma"), "{err}");
}

#[test]
fn gate_failure_exits_one() {
    // centering at tiny n is outside the 2% band
    let dir = tempfile::tempdir().unwrap();
    let out = lpp()
        .args(["simulate", "airy", "--n", "20", "--samples", "40", "--master-seed", "3"])
        .arg("--output-dir")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn passing_run_exits_zero_and_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = lpp()
        .args(["verify", "comparison", "--n", "40", "--samples", "25", "--master-seed", "1"])
        .arg("--output-dir")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("violations: ") || text.contains("violations_zero"), "{text}");
    assert!(dir.path().join("verify_comparison.csv").exists());
    assert!(dir.path().join("verify_comparison_summary.json").exists());
}

#[test]
fn zero_samples_fail_with_no_data() {
    let dir = tempfile::tempdir().unwrap();
    let out = lpp()
        .args(["simulate", "airy", "--n", "50", "--samples", "0"])
        .arg("--output-dir")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("no data"), "{text}");
}

#[test]
fn rerun_is_byte_identical_and_thread_invariant() {
    let base = tempfile::tempdir().unwrap();
    let mut csvs: Vec<Vec<u8>> = Vec::new();
    for (label, threads) in [("a", "2"), ("b", "2"), ("c", "1"), ("d", "4")] {
        let dir = base.path().join(label);
        let out = lpp()
            .args([
                "simulate",
                "local",
                "--n",
                "120",
                "--samples",
                "60",
                "--master-seed",
                "11",
                "--grid",
                "0,1,5",
                "--threads",
                threads,
            ])
            .arg("--output-dir")
            .arg(&dir)
            .output()
            .unwrap();
        assert!(out.status.code() == Some(0) || out.status.code() == Some(1));
        csvs.push(read(&dir.join("local_fluct.csv")));
    }
    assert_eq!(csvs[0], csvs[1], "identical rerun must be byte-identical");
    assert_eq!(csvs[0], csvs[2], "thread count must not change the payload");
    assert_eq!(csvs[0], csvs[3], "thread count must not change the payload");
}

#[test]
fn config_file_with_cli_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(
        &cfg,
        "experiment = verify_comparison\nn = 40\nsamples = 10\nmaster_seed = 5\nlambda = 1.25\n",
    )
    .unwrap();
    let out = lpp()
        .args(["verify", "comparison", "--config"])
        .arg(&cfg)
        .args(["--samples", "15"])
        .arg("--output-dir")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let summary: serde_json::Value =
        serde_json::from_slice(&read(&dir.path().join("verify_comparison_summary.json"))).unwrap();
    assert_eq!(summary["config"]["samples"], 15, "flag overrides file");
    assert_eq!(summary["config"]["n"], 40, "file value kept");
    assert_eq!(summary["config"]["lambda"], 1.25);
}

#[test]
fn csv_schema_matches_contract() {
    let dir = tempfile::tempdir().unwrap();
    let out = lpp()
        .args(["simulate", "local", "--n", "60", "--samples", "3", "--master-seed", "2", "--grid", "0,1,3"])
        .arg("--output-dir")
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(out.status.code() == Some(0) || out.status.code() == Some(1));
    let text = String::from_utf8(read(&dir.path().join("local_fluct.csv"))).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "experiment,n,sample_id,u,value,kind");
    let first = lines.next().unwrap();
    let fields: Vec<&str> = first.split(',').collect();
    assert_eq!(fields.len(), 6);
    assert_eq!(fields[0], "local_fluct");
    assert_eq!(fields[1], "60");
    assert_eq!(fields[2], "0");
    // floats carry 17 significant digits
    let v: f64 = fields[4].parse().unwrap();
    assert!(v.is_finite());
    assert!(fields[4].contains('e'), "scientific notation: {}", fields[4]);
}

#[test]
fn env_var_overrides_config_threads() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "experiment = oracle_suite\nsamples = 30\nthreads = 3\n").unwrap();
    let out = lpp()
        .args(["oracle", "--config"])
        .arg(&cfg)
        .arg("--output-dir")
        .arg(dir.path())
        .env("LPP_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let summary: serde_json::Value =
        serde_json::from_slice(&read(&dir.path().join("oracle_suite_summary.json"))).unwrap();
    assert_eq!(summary["config"]["threads"], 1);
}
