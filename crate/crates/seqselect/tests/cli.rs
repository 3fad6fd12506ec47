//! End-to-end tests of the `seqselect` binary: exit codes, output shapes,
//! and the worked estimate example.

use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_seqselect"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

fn write_file(dir: &Path, name: &str, content: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, content).unwrap();
    path.to_string_lossy().into_owned()
}

const TWO_ROW_CSV: &str = "lambda,x,sigma\n1,5.0,1.0\n2,0.1,1.0\n";

fn study_config_json(n_reps: u64) -> String {
    format!(
        r#"{{
  "n": 24,
  "gamma": 0.25,
  "profile": {{"type": "linear", "slope": 0.05}},
  "signal_range": [-6.0, 6.0],
  "n_reps": {n_reps},
  "seed": 42,
  "selectors": ["adaptive_threshold", "universal", "sparse_oracle",
                "greedy_full_subset", "oracle_support"]
}}"#
    )
}

#[test]
fn estimate_adaptive_worked_example() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_file(dir.path(), "obs.csv", TWO_ROW_CSV);
    let out = run(&["estimate", "--input", &input, "--method", "adaptive_threshold"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["selector"], "adaptive_threshold");
    assert_eq!(v["mask"], serde_json::json!([1]));
    let risk = v["penalized_risk"].as_f64().unwrap();
    assert!((risk - (-15.4548)).abs() < 1e-3, "risk {risk}");
    assert_eq!(v["fhat"], serde_json::json!([5.0, 0.0]));
}

#[test]
fn estimate_universal_reports_threshold() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_file(dir.path(), "obs.csv", TWO_ROW_CSV);
    let out = run(&["estimate", "--input", &input, "--method", "universal", "--precision", "12"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    let t = v["threshold"].as_f64().unwrap();
    assert!((t - (2.0 * 2f64.ln()).sqrt()).abs() < 1e-9);
}

#[test]
fn estimate_requires_gamma_for_sparse_methods() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_file(dir.path(), "obs.csv", TWO_ROW_CSV);
    for method in ["sparse_oracle", "minimax"] {
        let out = run(&["estimate", "--input", &input, "--method", method]);
        assert_eq!(out.status.code(), Some(1), "method {method}");
        assert!(String::from_utf8_lossy(&out.stderr).contains("gamma"));
    }
    let out = run(&[
        "estimate", "--input", &input, "--method", "sparse_oracle", "--gamma", "0.25",
    ]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn estimate_rejects_bad_csv() {
    let dir = tempfile::tempdir().unwrap();
    // empty file
    let empty = write_file(dir.path(), "empty.csv", "");
    let out = run(&["estimate", "--input", &empty, "--method", "universal"]);
    assert_eq!(out.status.code(), Some(1));
    // header only
    let header = write_file(dir.path(), "header.csv", "lambda,x,sigma\n");
    let out = run(&["estimate", "--input", &header, "--method", "universal"]);
    assert_eq!(out.status.code(), Some(1));
    // bad cell names the line
    let bad = write_file(dir.path(), "bad.csv", "lambda,x,sigma\n1,0.5,1.0\n2,oops,1.0\n");
    let out = run(&["estimate", "--input", &bad, "--method", "universal"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 3"), "stderr: {err}");
    // missing file
    let out = run(&["estimate", "--input", "/nonexistent.csv", "--method", "universal"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn estimate_runtime_error_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let mut csv = String::from("lambda,x,sigma\n");
    for i in 1..=21 {
        csv.push_str(&format!("{i},0.5,1.0\n"));
    }
    let input = write_file(dir.path(), "big.csv", &csv);
    let out = run(&["estimate", "--input", &input, "--method", "exhaustive"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("exceeds limit"));
}

#[test]
fn simulate_writes_report_csv() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_file(dir.path(), "study.json", &study_config_json(20));
    let out_path = dir.path().join("report.csv");
    let out = run(&["simulate", "--config", &config, "--out", out_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&out_path).unwrap();
    assert!(text.starts_with("selector,gamma,mean_rel_err,stderr,n_reps,n_undefined\n"));
    assert_eq!(text.lines().count(), 6, "5 selector rows: {text}");
    assert!(text.contains("adaptive_threshold,0.25,"));
}

#[test]
fn simulate_bundled_study_config() {
    let config = concat!(env!("CARGO_MANIFEST_DIR"), "/../../configs/study_dense.json");
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("report.csv");
    let out = run(&[
        "simulate", "--config", config, "--out", out_path.to_str().unwrap(), "--n_reps", "5",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&out_path).unwrap();
    // five selector rows under the header
    assert_eq!(text.lines().count(), 6, "{text}");
    for id in [
        "adaptive_threshold",
        "universal",
        "sparse_oracle",
        "greedy_full_subset",
        "oracle_support",
    ] {
        assert!(text.contains(id), "{id} missing from report");
    }
}

#[test]
fn simulate_honors_rep_override() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_file(dir.path(), "study.json", &study_config_json(20));
    let out_path = dir.path().join("report.csv");
    let out = run(&[
        "simulate", "--config", &config, "--out", out_path.to_str().unwrap(), "--n_reps", "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&out_path).unwrap();
    for row in text.lines().skip(1) {
        let cols: Vec<&str> = row.split(',').collect();
        assert_eq!(cols[4], "1", "n_reps column: {row}");
        assert_eq!(cols[3], "0", "stderr column with one rep: {row}");
    }
}

#[test]
fn simulate_config_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("report.csv");
    // missing config file
    let out = run(&["simulate", "--config", "/no/such/config.json", "--out", out_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    // unknown key is named
    let bad = write_file(
        dir.path(),
        "bad.json",
        &study_config_json(5).replace("\"seed\"", "\"sead\""),
    );
    let out = run(&["simulate", "--config", &bad, "--out", out_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("sead"));
    // invalid gamma override
    let config = write_file(dir.path(), "study.json", &study_config_json(5));
    let out = run(&[
        "simulate", "--config", &config, "--out", out_path.to_str().unwrap(), "--gamma", "1.5",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn simulate_is_deterministic_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_file(dir.path(), "study.json", &study_config_json(30));
    let a_path = dir.path().join("a.csv");
    let b_path = dir.path().join("b.csv");
    let out = run(&[
        "simulate", "--config", &config, "--out", a_path.to_str().unwrap(), "--threads", "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let out = run(&[
        "simulate", "--config", &config, "--out", b_path.to_str().unwrap(), "--threads", "4",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        std::fs::read(&a_path).unwrap(),
        std::fs::read(&b_path).unwrap(),
        "reports differ across thread counts"
    );
}

#[test]
fn bounds_homogeneous_surfaces_module_invariant() {
    let dir = tempfile::tempdir().unwrap();
    let sigma_file = write_file(dir.path(), "sigma.txt", &"1.0\n".repeat(50));
    let out = run(&[
        "bounds", "--profile", "custom", "--sigma-file", &sigma_file, "--gamma", "0.1",
        "--precision", "10",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["lower_uniform"], v["upper_minimax"]);
    assert_eq!(v["n"], 50);
}

#[test]
fn bounds_linear_profile_value() {
    let out = run(&[
        "bounds", "--profile", "linear", "--n", "200", "--slope", "0.01", "--gamma", "0.05",
        "--precision", "10",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    let lu = v["lower_uniform"].as_f64().unwrap();
    assert!((lu - 80.48633899).abs() < 1e-4, "lower_uniform {lu}");
    // field order is part of the interface
    let text = String::from_utf8_lossy(&out.stdout);
    let pos = |k: &str| text.find(k).unwrap_or_else(|| panic!("{k} missing"));
    assert!(pos("lower_entropy") < pos("lower_uniform"));
    assert!(pos("lower_uniform") < pos("lower_topk"));
    assert!(pos("lower_topk") < pos("upper_minimax"));
    assert!(pos("upper_minimax") < pos("\"beta\""));
}

#[test]
fn bounds_invalid_gamma_exits_1() {
    let out = run(&[
        "bounds", "--profile", "linear", "--n", "10", "--slope", "0.1", "--gamma", "1.5",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let out = run(&[
        "bounds", "--profile", "linear", "--n", "10", "--slope", "0.1", "--gamma", "0.1",
        "--c", "2.0",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn figure_emits_csv() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_file(dir.path(), "study.json", &study_config_json(5));
    let out_path = dir.path().join("figure.csv");
    let out = run(&[
        "figure", "--config", &config, "--rep", "2", "--out", out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&out_path).unwrap();
    assert!(text.starts_with(
        "lambda,f,x,sigma,universal_thr,sparse_thr,in_full_subset,in_adaptive_thr\n"
    ));
    assert_eq!(text.lines().count(), 25); // header + n rows
    let flags: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert!(flags[6] == "0" || flags[6] == "1");
}

#[test]
fn verify_hull_passes() {
    let dir = tempfile::tempdir().unwrap();
    let sigma_file = write_file(dir.path(), "sigma.txt", "1.0\n");
    let out = run(&[
        "verify", "--suite", "hull", "--profile", "custom", "--sigma-file", &sigma_file,
        "--n_reps", "2000", "--seed", "5",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("suite: hull"));
    assert!(text.contains("result: PASS"));
}

#[test]
fn verify_oracle_passes() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_file(dir.path(), "study.json", &study_config_json(400));
    let out = run(&[
        "verify", "--suite", "oracle", "--config", &config, "--delta", "0.5",
        "--family", "threshold",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("suite: oracle"));
    assert!(text.contains("result: PASS"));
}

#[test]
fn verify_rejects_bad_usage() {
    // unknown suite name is a usage error
    let out = run(&["verify", "--suite", "nonsense"]);
    assert_eq!(out.status.code(), Some(1));
    // oracle suite without config
    let out = run(&["verify", "--suite", "oracle"]);
    assert_eq!(out.status.code(), Some(1));
    // delta out of range
    let dir = tempfile::tempdir().unwrap();
    let config = write_file(dir.path(), "study.json", &study_config_json(10));
    let out = run(&[
        "verify", "--suite", "oracle", "--config", &config, "--delta", "1.5",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn estimate_survives_a_closed_pipe() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_file(dir.path(), "obs.csv", TWO_ROW_CSV);
    // `head -1` closes the pipe after one line; the binary must not panic
    let out = Command::new("sh")
        .arg("-c")
        .arg(format!(
            "{} estimate --input {input} --method adaptive_threshold | head -1; \
             exit ${{PIPESTATUS[0]:-0}}",
            env!("CARGO_BIN_EXE_seqselect")
        ))
        .output()
        .expect("shell runs");
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(!stderr.contains("panicked"), "stderr: {stderr}");
}

#[test]
fn help_exits_zero() {
    let out = run(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    let out = run(&["simulate", "--help"]);
    assert_eq!(out.status.code(), Some(0));
    // bare invocation without a subcommand is a usage error
    let out = run(&[]);
    assert_eq!(out.status.code(), Some(1));
}
