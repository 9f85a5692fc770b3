//! End-to-end tests of the binary: output formats, determinism, exit codes.

use std::path::Path;
use std::process::{Command, Output};
use std::str::FromStr;

use sigmeas::metric::DistanceBracket;
use sigmeas::Scalar;

fn sigmeas(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sigmeas"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 output")
}

fn write_file(dir: &Path, name: &str, content: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, content).expect("writable temp dir");
    path.to_string_lossy().into_owned()
}

#[test]
fn gen_typewriter_term() {
    let out = sigmeas(&["gen", "--family", "typewriter", "--n", "4"]);
    assert!(out.status.success());
    assert_eq!(
        stdout_of(&out).trim_end(),
        r#"{"atoms":[{"x":"0","w":"1"},{"x":"1/4","w":"-1"}]}"#
    );
}

#[test]
fn gen_interval_stage_is_a_step_function() {
    let out = sigmeas(&["gen", "--family", "cantor_stage", "--n", "1"]);
    assert!(out.status.success());
    assert_eq!(
        stdout_of(&out).trim_end(),
        r#"{"breakpoints":["0","1/3","2/3","1"],"values":["0","1","0","1","0"]}"#
    );
}

#[test]
fn gen_unknown_family_is_usage_error() {
    let out = sigmeas(&["gen", "--family", "no_such_family", "--n", "3"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn gen_zero_index_is_contract_violation() {
    let out = sigmeas(&["gen", "--family", "escape_mass", "--n", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn dist_of_equal_inputs_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let box01 = r#"{"breakpoints":["0","1"],"values":["0","1","0"]}"#;
    let f = write_file(dir.path(), "f.json", box01);
    let g = write_file(dir.path(), "g.json", box01);
    let out = sigmeas(&["dist", "--f", &f, "--g", &g, "--tol", "1/1000000"]);
    assert!(out.status.success());
    assert_eq!(
        stdout_of(&out).trim_end(),
        r#"{"lo":"0","hi":"0","witness_c":"0"}"#
    );
}

#[test]
fn dist_round_trips_generated_stages() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("s1.json").to_string_lossy().into_owned();
    let g = dir.path().join("s2.json").to_string_lossy().into_owned();
    assert!(sigmeas(&["gen", "--family", "svc_stage", "--n", "1", "--out", &f])
        .status
        .success());
    assert!(sigmeas(&["gen", "--family", "svc_stage", "--n", "2", "--out", &g])
        .status
        .success());
    let out = sigmeas(&["dist", "--f", &f, "--g", &g, "--tol", "1/1000000"]);
    assert!(out.status.success());
    let bracket: DistanceBracket = serde_json::from_str(stdout_of(&out).trim_end()).unwrap();
    assert!(bracket.contains(&Scalar::from_str("1/8").unwrap()));
}

#[test]
fn dist_rejects_bad_tolerances() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_file(dir.path(), "f.json", r#"{"breakpoints":[],"values":["0"]}"#);
    for tol in ["abc", "0", "-1/2", "1/0"] {
        let out = sigmeas(&["dist", "--f", &f, "--g", &f, "--tol", tol]);
        assert_eq!(out.status.code(), Some(1), "tol = {tol}");
    }
}

#[test]
fn dist_rejects_malformed_rationals_in_files() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_file(
        dir.path(),
        "f.json",
        r#"{"breakpoints":["1.5"],"values":["0","1"]}"#,
    );
    let out = sigmeas(&["dist", "--f", &f, "--g", &f, "--tol", "1/10"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn report_blowup_dipole_verdicts() {
    let out = sigmeas(&[
        "report",
        "--family",
        "blowup_dipole",
        "--n-range",
        "2:20",
        "--radii",
        "1,2",
        "--tol",
        "1/1000000",
    ]);
    assert!(out.status.success(), "exit {:?}", out.status.code());
    let verdicts: serde_json::Value = serde_json::from_str(stdout_of(&out).trim_end()).unwrap();
    assert_eq!(verdicts["vague"], false);
    assert_eq!(verdicts["almost_basic"], true);
    assert_eq!(verdicts["consistent"], true);
    assert_eq!(verdicts["loose"], false);
}

#[test]
fn report_output_is_deterministic() {
    let args = [
        "report",
        "--family",
        "escape_mass",
        "--n-range",
        "1:12",
        "--tol",
        "1/10000",
    ];
    let first = sigmeas(&args);
    let second = sigmeas(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn report_with_blind_test_family_signals_inconsistency() {
    // hats alone integrate the middle-thirds stages to ~0 while the variation
    // explodes, so the self-check must fail with exit code 3
    let dir = tempfile::tempdir().unwrap();
    let hats = r#"[
        {"nodes":["-1/2","0","1/2"],"node_values":["0","1","0"],"left_tail":"0","right_tail":"0"},
        {"nodes":["1/2","1","3/2"],"node_values":["0","1","0"],"left_tail":"0","right_tail":"0"}
    ]"#;
    let phis = write_file(dir.path(), "phis.json", hats);
    let out = sigmeas(&[
        "report",
        "--family",
        "cantor_stage",
        "--n-range",
        "0:8",
        "--phis",
        &phis,
    ]);
    assert_eq!(out.status.code(), Some(3));
    // the verdict file is still produced, with the flag down
    let verdicts: serde_json::Value = serde_json::from_str(stdout_of(&out).trim_end()).unwrap();
    assert_eq!(verdicts["consistent"], false);
}

#[test]
fn diag_writes_csv_trace() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("trace.csv");
    let out = sigmeas(&[
        "diag",
        "--family",
        "escape_mass",
        "--n-range",
        "1:10",
        "--radii",
        "1,5",
        "--tol",
        "1/10000",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let csv = std::fs::read_to_string(&path).unwrap();
    let mut lines = csv.lines();
    let header = lines.next().unwrap();
    assert!(header.starts_with("n,d_lo,d_hi,tv_r1,tv_r5,gap_0"));
    assert!(header.ends_with("total_tv,tight_r"));
    assert_eq!(lines.clone().count(), 10);
    // total variation column is exactly n
    let first = lines.next().unwrap();
    let fields: Vec<&str> = first.split(',').collect();
    assert_eq!(fields[0], "1");
    assert_eq!(fields[fields.len() - 2], "1");
    assert_eq!(fields[fields.len() - 1], "1");
}

#[test]
fn diag_accepts_explicit_input() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_file(
        dir.path(),
        "seq.json",
        r#"{"measures":[{"atoms":[{"x":"0","w":"1"}]},{"atoms":[{"x":"0","w":"1"}]}],
            "limit":{"atoms":[{"x":"0","w":"1"}]}}"#,
    );
    let out = sigmeas(&["diag", "--input", &input]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    let mut lines = text.lines();
    lines.next();
    for line in lines {
        assert!(line.starts_with(|c: char| c.is_ascii_digit()));
        assert!(line.contains(",0,0,")); // zero distance bracket per row
    }
}

#[test]
fn requires_family_or_input() {
    let out = sigmeas(&["report"]);
    assert_eq!(out.status.code(), Some(1));
    let out = sigmeas(&["diag", "--family", "typewriter", "--input", "x.json"]);
    assert_eq!(out.status.code(), Some(1));
}
