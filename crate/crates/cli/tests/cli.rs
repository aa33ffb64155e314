//! End-to-end tests of the `qgeom` binary: exit-code discipline, output
//! determinism, file formats, and the documented example values.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qgeom"))
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    bin()
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, content: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, content).unwrap();
    path
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

const RHO1: &str = r#"{"dim": 3, "re": [[1,0,0],[0,0,0],[0,0,0]], "im": [[0,0,0],[0,0,0],[0,0,0]]}"#;
const RHO2: &str =
    r#"{"dim": 3, "re": [[0,0,0],[0,0.5,0],[0,0,0.5]], "im": [[0,0,0],[0,0,0],[0,0,0]]}"#;

#[test]
fn dist_reproduces_the_orthogonal_pair_numbers() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "rho1.json", RHO1);
    write(dir.path(), "rho2.json", RHO2);
    let out = run_in(dir.path(), &["dist", "rho1.json", "rho2.json"]);
    let v = stdout_json(&out);
    assert!((v["d_hs"].as_f64().unwrap() - 1.5_f64.sqrt()).abs() <= 1e-12);
    assert!((v["d_trace"].as_f64().unwrap() - 1.0).abs() <= 1e-10);
    assert!((v["d_bures"].as_f64().unwrap() - 2.0_f64.sqrt()).abs() <= 1e-10);
    assert_eq!(v["orthogonal_supports"], serde_json::Value::Bool(true));
    assert!(v["fuchs_vdg"]["lower"].as_f64().unwrap() <= v["fuchs_vdg"]["upper"].as_f64().unwrap());
}

#[test]
fn dist_of_a_state_with_itself_is_consistent() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "rho.json", RHO2);
    let out = run_in(dir.path(), &["dist", "rho.json", "rho.json"]);
    let v = stdout_json(&out);
    assert!(v["d_hs"].as_f64().unwrap() <= 1e-9);
    assert!(v["d_trace"].as_f64().unwrap() <= 1e-9);
    let rf = v["root_fidelity"].as_f64().unwrap();
    let db = v["d_bures"].as_f64().unwrap();
    // cross-field consistency: d_bures = sqrt(2 - 2 rf)
    assert!((db - (2.0 - 2.0 * rf).max(0.0).sqrt()).abs() <= 1e-12);
}

#[test]
fn dist_fields_are_self_consistent_on_random_pairs() {
    let dir = tempfile::tempdir().unwrap();
    let res = bin()
        .args(["sample", "--dim", "4", "--rank", "3", "--count", "2", "--seed", "33", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(res.status.success());
    let out = run_in(dir.path(), &["dist", "state_000.json", "state_001.json"]);
    let v = stdout_json(&out);
    let rf = v["root_fidelity"].as_f64().unwrap();
    let f = v["fidelity"].as_f64().unwrap();
    let db = v["d_bures"].as_f64().unwrap();
    let dtr = v["d_trace"].as_f64().unwrap();
    assert!((f - rf * rf).abs() <= 1e-12);
    assert!((db - (2.0 - 2.0 * rf).max(0.0).sqrt()).abs() <= 1e-12);
    assert!(v["fuchs_vdg"]["lower"].as_f64().unwrap() <= dtr + 1e-9);
    assert!(dtr <= v["fuchs_vdg"]["upper"].as_f64().unwrap() + 1e-9);
    assert_eq!(v["orthogonal_supports"], serde_json::Value::Bool(false));
}

#[test]
fn dist_output_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "rho1.json", RHO1);
    write(dir.path(), "rho2.json", RHO2);
    let a = run_in(dir.path(), &["dist", "rho1.json", "rho2.json"]);
    let b = run_in(dir.path(), &["dist", "rho1.json", "rho2.json"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn dist_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "rho1.json", RHO1);
    write(dir.path(), "broken.json", "{\"dim\": 2, ");
    write(
        dir.path(),
        "badtrace.json",
        r#"{"dim": 2, "re": [[1,0],[0,1]], "im": [[0,0],[0,0]]}"#,
    );
    write(
        dir.path(),
        "qubit.json",
        r#"{"dim": 2, "re": [[1,0],[0,0]], "im": [[0,0],[0,0]]}"#,
    );

    let parse = run_in(dir.path(), &["dist", "broken.json", "rho1.json"]);
    assert_eq!(parse.status.code(), Some(2));

    let missing = run_in(dir.path(), &["dist", "nosuch.json", "rho1.json"]);
    assert_eq!(missing.status.code(), Some(2));

    let invalid = run_in(dir.path(), &["dist", "badtrace.json", "rho1.json"]);
    assert_eq!(invalid.status.code(), Some(3));

    let mismatch = run_in(dir.path(), &["dist", "rho1.json", "qubit.json"]);
    assert_eq!(mismatch.status.code(), Some(4));
}

#[test]
fn orbit_trace_pair_example() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "p.json", r#"{"p": [0.7, 0.3]}"#);
    write(dir.path(), "q.json", r#"{"p": [0.6, 0.4]}"#);
    let out = run_in(
        dir.path(),
        &["orbit", "p.json", "q.json", "trace", "--samples", "64"],
    );
    let v = stdout_json(&out);
    assert!((v["lower"].as_f64().unwrap() - 0.1).abs() <= 1e-12);
    assert!((v["upper"].as_f64().unwrap() - 0.3).abs() <= 1e-12);
    assert!((v["oracle_min"].as_f64().unwrap() - 0.1).abs() <= 1e-9);
    assert!((v["oracle_max"].as_f64().unwrap() - 0.3).abs() <= 1e-9);
    assert_eq!(v["argmin_perm"], serde_json::json!([0, 1]));
    assert_eq!(v["argmax_perm"], serde_json::json!([1, 0]));
    assert_eq!(v["samples"], serde_json::json!(64));
}

#[test]
fn orbit_identical_spectra_and_orthogonal_pure() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "p.json", r#"{"p": [0.5, 0.5]}"#);
    let out = run_in(
        dir.path(),
        &["orbit", "p.json", "p.json", "bures", "--samples", "16"],
    );
    let v = stdout_json(&out);
    assert!(v["lower"].as_f64().unwrap().abs() <= 1e-12);

    write(dir.path(), "e0.json", r#"{"p": [1.0, 0.0]}"#);
    write(dir.path(), "e1.json", r#"{"p": [0.0, 1.0]}"#);
    let out = run_in(
        dir.path(),
        &["orbit", "e0.json", "e1.json", "trace", "--samples", "16"],
    );
    let v = stdout_json(&out);
    assert!((v["upper"].as_f64().unwrap() - 1.0).abs() <= 1e-12);
    assert!((v["oracle_max"].as_f64().unwrap() - 1.0).abs() <= 1e-9);
}

#[test]
fn orbit_rejects_oversized_spectra_with_exit_5() {
    let dir = tempfile::tempdir().unwrap();
    let p: Vec<f64> = vec![1.0 / 9.0; 9];
    write(
        dir.path(),
        "big.json",
        &format!("{{\"p\": {:?}}}", p),
    );
    let out = run_in(
        dir.path(),
        &["orbit", "big.json", "big.json", "trace", "--samples", "1"],
    );
    assert_eq!(out.status.code(), Some(5));
}

#[test]
fn discriminate_paths() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "pair.json", &format!("[{},{}]", RHO1, RHO2));
    let yes = run_in(dir.path(), &["discriminate", "pair.json"]);
    assert_eq!(yes.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&yes.stdout).unwrap();
    assert_eq!(v["discriminable"], serde_json::Value::Bool(true));
    assert_eq!(v["rank_sum"], serde_json::json!(3));
    assert!(v["povm"]["elements"].as_array().unwrap().len() == 3);

    write(dir.path(), "dup.json", &format!("[{},{}]", RHO2, RHO2));
    let no = run_in(dir.path(), &["discriminate", "dup.json"]);
    assert_eq!(no.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&no.stdout).unwrap();
    assert_eq!(v["discriminable"], serde_json::Value::Bool(false));
    assert!(v["povm"].is_null());

    // full-rank pair: rank sum exceeds the dimension
    write(
        dir.path(),
        "fullrank.json",
        r#"[{"dim": 2, "re": [[0.5,0],[0,0.5]], "im": [[0,0],[0,0]]},
            {"dim": 2, "re": [[0.6,0.1],[0.1,0.4]], "im": [[0,0],[0,0]]}]"#,
    );
    let no = run_in(dir.path(), &["discriminate", "fullrank.json"]);
    assert_eq!(no.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&no.stdout).unwrap();
    assert_eq!(v["rank_sum"], serde_json::json!(4));
}

#[test]
fn sample_is_deterministic_and_valid() {
    let dir = tempfile::tempdir().unwrap();
    let out_a = dir.path().join("a");
    let out_b = dir.path().join("b");
    for out in [&out_a, &out_b] {
        let res = bin()
            .args([
                "sample",
                "--dim",
                "3",
                "--rank",
                "1",
                "--count",
                "2",
                "--seed",
                "7",
                "--out",
            ])
            .arg(out)
            .output()
            .unwrap();
        assert!(res.status.success());
    }
    for name in ["state_000.json", "state_001.json"] {
        let a = fs::read(out_a.join(name)).unwrap();
        let b = fs::read(out_b.join(name)).unwrap();
        assert_eq!(a, b, "{} differs between identical runs", name);
    }
    // pure states: validated and purity 1
    let text = fs::read_to_string(out_a.join("state_000.json")).unwrap();
    let matrix: qgeom_core::ComplexMatrix = serde_json::from_str(&text).unwrap();
    let state = qgeom_core::validate_state(&matrix).unwrap();
    assert!((state.purity() - 1.0).abs() <= 1e-10);

    // unitaries and spectra also parse and validate
    let res = bin()
        .args(["sample", "--dim", "4", "--kind", "unitary", "--out"])
        .arg(dir.path().join("u"))
        .output()
        .unwrap();
    assert!(res.status.success());
    let text = fs::read_to_string(dir.path().join("u/unitary_000.json")).unwrap();
    let m: qgeom_core::ComplexMatrix = serde_json::from_str(&text).unwrap();
    assert!(m.unitarity_residual() <= 1e-10);

    let res = bin()
        .args(["sample", "--dim", "1", "--out"])
        .arg(dir.path().join("one"))
        .output()
        .unwrap();
    assert!(res.status.success());
    let text = fs::read_to_string(dir.path().join("one/state_000.json")).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert!((v["re"][0][0].as_f64().unwrap() - 1.0).abs() <= 1e-12);

    // default rank is full rank
    let res = bin()
        .args(["sample", "--dim", "4", "--out"])
        .arg(dir.path().join("full"))
        .output()
        .unwrap();
    assert!(res.status.success());
    let text = fs::read_to_string(dir.path().join("full/state_000.json")).unwrap();
    let matrix: qgeom_core::ComplexMatrix = serde_json::from_str(&text).unwrap();
    let state = qgeom_core::validate_state(&matrix).unwrap();
    assert_eq!(qgeom_core::numerical_rank(&state, 1e-10), 4);
}

#[test]
fn sample_rejects_bad_rank() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &["sample", "--dim", "2", "--rank", "3"],
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_small_run_csv_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let csv = run_in(
        dir.path(),
        &[
            "verify", "--dims", "2,3", "--samples", "20", "--seed", "5", "--format", "csv",
        ],
    );
    assert_eq!(
        csv.status.code(),
        Some(0),
        "stdout:\n{}\nstderr:\n{}",
        String::from_utf8_lossy(&csv.stdout),
        String::from_utf8_lossy(&csv.stderr)
    );
    let text = String::from_utf8(csv.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "property,dim,samples,passes,failures,worst_residual,seed"
    );
    assert!(text.lines().any(|l| l.starts_with("orbit_bound_containment,2")));
    assert!(text.lines().any(|l| l.starts_with("hs_nonmonotonicity_witness,0")));

    let json = run_in(
        dir.path(),
        &[
            "verify", "--dims", "2", "--samples", "5", "--seed", "5", "--format", "json",
        ],
    );
    assert_eq!(json.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&json.stdout).unwrap();
    assert!(v["outcomes"].as_array().unwrap().len() > 10);

    // degenerate single-sample run completes with well-formed output
    let tiny = run_in(
        dir.path(),
        &["verify", "--dims", "2", "--samples", "1", "--format", "json"],
    );
    let v: serde_json::Value = serde_json::from_slice(&tiny.stdout).unwrap();
    assert!(v["outcomes"].as_array().is_some());
}

#[test]
fn verify_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "verify", "--dims", "2", "--samples", "10", "--seed", "9", "--format", "json",
    ];
    let a = run_in(dir.path(), &args);
    let b = run_in(dir.path(), &args);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn tol_dotted_flag_spellings_are_accepted() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "pair.json", &format!("[{},{}]", RHO1, RHO2));
    for extra in [
        vec!["--tol", "overlap=1e-6"],
        vec!["--tol.overlap", "1e-6"],
        vec!["--tol.overlap=1e-6"],
    ] {
        let mut args = vec!["discriminate", "pair.json"];
        args.extend(extra);
        let out = run_in(dir.path(), &args);
        assert_eq!(out.status.code(), Some(0));
    }
    let bad = run_in(
        dir.path(),
        &["discriminate", "pair.json", "--tol", "bogus=1"],
    );
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn csv_format_is_rejected_outside_verify() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "rho1.json", RHO1);
    write(dir.path(), "rho2.json", RHO2);
    let out = run_in(
        dir.path(),
        &["dist", "rho1.json", "rho2.json", "--format", "csv"],
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "rho1.json", RHO1);
    write(dir.path(), "rho2.json", RHO2);
    let target = dir.path().join("report.json");
    let out = bin()
        .current_dir(dir.path())
        .args(["dist", "rho1.json", "rho2.json", "--out"])
        .arg(&target)
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&target).unwrap()).unwrap();
    assert!(v["d_hs"].as_f64().is_some());
}
