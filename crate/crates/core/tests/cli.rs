//! CLI contract: parsing, determinism and exit codes.

use std::path::{Path, PathBuf};
use std::process::Command;

use tempfile::TempDir;
use wlab_core::cli::{load_curve, run_cli, EXIT_INPUT, EXIT_INTERNAL, EXIT_OK};
use wlab_core::report::CurveSpecFile;
use wlab_core::scalar::FieldDescriptor;

fn run(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run_cli(std::iter::once("wlab").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// `X^6 - Y^6 + Z^6`, which has the rational points `(1 : 1 : 0)` and `(0 : 1 : 1)`.
const TWISTED: &str = r#"{
  "degree": 6,
  "field": { "kind": "rational" },
  "coefficients": [
    { "exponents": [6, 0, 0], "value": "1" },
    { "exponents": [0, 6, 0], "value": "-1" },
    { "exponents": [0, 0, 6], "value": "1" }
  ],
  "label": "twisted fermat"
}"#;

#[test]
fn curve_spec_round_trip_through_files() {
    let dir = TempDir::new().unwrap();
    for field in [
        FieldDescriptor::Rational,
        FieldDescriptor::number_field("t^6 + 1"),
        FieldDescriptor::Complex { precision_bits: 128 },
    ] {
        let file = CurveSpecFile::kuribayashi("1/2", "0", "-3", field);
        let spec = file.build().unwrap();
        let path = write(&dir, "curve.json", &CurveSpecFile::from_spec(&spec).to_json());
        assert_eq!(load_curve(&path).unwrap(), spec);
        assert_eq!(file.coefficients.len(), 5, "the b = 0 term is omitted");
    }
}

#[test]
fn parse_errors_are_input_errors_with_field_paths() {
    let dir = TempDir::new().unwrap();
    let bad = write(
        &dir,
        "bad.json",
        r#"{"degree": 6, "field": {"kind": "rational"},
            "coefficients": [{"exponents": [5, 0, 0], "value": "1"}]}"#,
    );
    let (code, _, err) = run(&["flexes", "--curve", s(&bad)]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("coefficients[0].exponents"), "{err}");

    let quintic = write(
        &dir,
        "quintic.json",
        r#"{"degree": 5, "field": {"kind": "rational"},
            "coefficients": [{"exponents": [5, 0, 0], "value": "1"}]}"#,
    );
    assert_eq!(run(&["flexes", "--curve", s(&quintic)]).0, EXIT_INPUT);

    let modulus = write(
        &dir,
        "modulus.json",
        r#"{"degree": 6, "field": {"kind": "number-field", "minimal_polynomial": "t^2 - 2*t + 1"},
            "coefficients": [{"exponents": [6, 0, 0], "value": "1"}]}"#,
    );
    let (code, _, err) = run(&["flexes", "--curve", s(&modulus)]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("minimal polynomial"), "{err}");

    let value = write(
        &dir,
        "value.json",
        r#"{"degree": 6, "field": {"kind": "rational"},
            "coefficients": [{"exponents": [6, 0, 0], "value": "1/0"}]}"#,
    );
    let (code, _, err) = run(&["flexes", "--curve", s(&value)]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("coefficients[0].value"), "{err}");

    assert_eq!(run(&["flexes", "--curve", "/nonexistent/curve.json"]).0, EXIT_INPUT);
}

#[test]
fn cli_errors_map_to_exit_1() {
    let dir = TempDir::new().unwrap();
    let curve = write(&dir, "c.json", TWISTED);
    assert_eq!(run(&["tables", "--unknown"]).0, EXIT_INPUT);
    assert_eq!(run(&["frobnicate"]).0, EXIT_INPUT);
    assert_eq!(run(&["classify", "--curve", s(&curve)]).0, EXIT_INPUT);
    assert_eq!(run(&["count", "--genus", "0", "--q", "1"]).0, EXIT_INPUT);
    let (code, _, err) = run(&["classify", "--curve", s(&curve), "--point", "1 : 2 : 3"]);
    assert_eq!(code, EXIT_OK, "per-point failures stay in the report");
    assert!(err.is_empty());
    let (code, _, err) = run(&["gaps", "--curve", s(&curve), "--point", "1 : 2 : 3"]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("residual"), "{err}");
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("family-scan"));
}

#[test]
fn reports_are_byte_deterministic() {
    let dir = TempDir::new().unwrap();
    let curve = write(&dir, "c.json", TWISTED);
    let points = write(&dir, "p.json", r#"[["1", "1", "0"], ["0", "1", "1"], ["1", "2", "3"]]"#);
    let args = ["--format", "json", "classify", "--curve", s(&curve), "--points", s(&points)];
    let first = run(&args);
    assert_eq!(first.0, EXIT_OK);
    assert_eq!(first, run(&args));
    let mut jobs = vec!["--jobs", "1"];
    jobs.extend(args);
    assert_eq!(first, run(&jobs));

    let doc: serde_json::Value = serde_json::from_str(&first.1).unwrap();
    assert_eq!(doc["points"].as_array().unwrap().len(), 3);
    assert_eq!(doc["points"][0]["kind"], "flex");
    assert_eq!(doc["points"][0]["weight"], 25);
    assert!(doc["points"][2]["error"].as_str().unwrap().contains("not on the curve"));

    let text = run(&["classify", "--curve", s(&curve), "--points", s(&points)]);
    assert_eq!(text, run(&["classify", "--curve", s(&curve), "--points", s(&points)]));
    assert!(text.1.contains("{1,2,3,4,7,8,9,13,14,19}"));
}

#[test]
fn flexes_do_not_depend_on_jobs() {
    let dir = TempDir::new().unwrap();
    let curve = write(&dir, "c.json", TWISTED);
    let one = run(&["--format", "json", "--jobs", "1", "flexes", "--curve", s(&curve)]);
    let two = run(&["--format", "json", "--jobs", "2", "flexes", "--curve", s(&curve)]);
    assert_eq!(one.0, EXIT_OK);
    assert_eq!(one, two);
}

#[test]
fn oracle_mismatch_fixture_exits_2() {
    let dir = TempDir::new().unwrap();
    let curve = write(&dir, "c.json", TWISTED);
    let (code, out, err) = run(&[
        "--format",
        "json",
        "--inject-oracle-mismatch",
        "gaps",
        "--curve",
        s(&curve),
        "--point",
        "1 : 1 : 0",
    ]);
    assert_eq!(code, EXIT_INTERNAL);
    assert!(err.contains("Wronskian"), "{err}");
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["points"][0]["weights_agree"], false);
    assert_eq!(doc["inconsistencies"].as_array().unwrap().len(), 1);

    let (code, _, _) = run(&["gaps", "--curve", s(&curve), "--point", "1 : 1 : 0"]);
    assert_eq!(code, EXIT_OK);
}

#[test]
fn count_and_tables() {
    let (code, out, _) = run(&["--format", "json", "count", "--genus", "10", "--q", "1"]);
    assert_eq!(code, EXIT_OK);
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["count"]["count"], 990);
    let (_, out, _) = run(&["count", "--genus", "10", "--q", "2"]);
    assert!(out.contains("7290"));

    let (code, out, _) = run(&["--format", "json", "tables"]);
    assert_eq!(code, EXIT_OK);
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["tables"]["flex"][0]["bound"], 495);
    let (_, text, _) = run(&["tables"]);
    assert!(text.contains("excluded by paper"));
}

#[test]
fn precision_comes_from_the_environment() {
    let dir = TempDir::new().unwrap();
    let curve = write(
        &dir,
        "c.json",
        &TWISTED.replace(r#"{ "kind": "rational" }"#, r#"{ "kind": "complex" }"#),
    );
    let exe = env!("CARGO_BIN_EXE_wlab");
    let run_env = |bits: &str| {
        Command::new(exe)
            .args(["--format", "json", "gaps", "--curve", s(&curve), "--point", "0 : 1 : 1"])
            .env("WLAB_PRECISION_BITS", bits)
            .output()
            .unwrap()
    };
    let out = run_env("128");
    assert_eq!(out.status.code(), Some(EXIT_OK));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["field"]["precision_bits"], 128);
    assert_eq!(run_env("12").status.code(), Some(EXIT_INPUT));
    assert_eq!(run_env("lots").status.code(), Some(EXIT_INPUT));
}

#[test]
fn family_scan_over_rationals() {
    let (code, out, _) = run(&["--format", "json", "family-scan", "--grid", "a=0,1;c=-1", "--field", "rational"]);
    assert_eq!(code, EXIT_OK);
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["family"].as_array().unwrap().len(), 2);
    assert_eq!(run(&["family-scan", "--grid", "d=1"]).0, EXIT_INPUT);
}
