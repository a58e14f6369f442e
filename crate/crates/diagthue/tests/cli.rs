//! End-to-end runs of the binary: worked examples, exit codes, schema
//! round-trips, and byte determinism.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_diagthue"))
}

fn temp_file(tag: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("diagthue-cli-{}-{tag}", std::process::id()));
    fs::write(&path, contents).unwrap();
    path
}

fn pure7_file(tag: &str) -> PathBuf {
    temp_file(
        tag,
        r#"{"kind": "diagonal", "r": 7, "alpha": "1", "beta": "0", "gamma": "0", "delta": "1"}"#,
    )
}

fn stdout_json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "command failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn invariants_reports_exact_discriminant() {
    let form = pure7_file("inv");
    let out = bin()
        .args(["invariants", "--form", form.to_str().unwrap(), "--h", "1"])
        .output()
        .unwrap();
    let v = stdout_json(&out);
    assert_eq!(v["invariants"]["Delta"], "-823543");
    assert_eq!(v["invariants"]["j"]["a"], "1");
    assert_eq!(v["manifest"]["command"], "invariants");
    assert_eq!(v["manifest"]["parameters"]["h"], "1");
    let raw = String::from_utf8(out.stdout).unwrap();
    assert!(raw.contains("\"Delta\": \"-823543\""));
}

#[test]
fn induction_prints_successor_tuples_for_both_branches() {
    let out = bin()
        .args(["induction", "--r", "7", "--seed", "default", "--n", "1", "--g", "0"])
        .output()
        .unwrap();
    let v = stdout_json(&out);
    assert_eq!(v["steps"][0]["successor"]["tuple"], "(13,5,23/5,9/5,3)");
    assert_eq!(v["final"]["n"], 2);

    let out = bin()
        .args(["induction", "--r", "7", "--seed", "default", "--n", "1", "--g", "1"])
        .output()
        .unwrap();
    let v = stdout_json(&out);
    assert_eq!(v["steps"][0]["successor"]["tuple"], "(7,5,37/5,16/5,2)");
}

#[test]
fn table_csv_keeps_main_below_the_comparison_column() {
    let out = bin().args(["table", "--r", "7..12", "--h", "1"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    let manifest_line = lines.next().unwrap();
    assert!(manifest_line.starts_with("# {"));
    assert_eq!(
        lines.next().unwrap(),
        "r,h,log10_main,log10_akss_ii_m4,log10_siegel_l1,min_theorem"
    );
    let mut rows = 0;
    for line in lines {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols.len(), 6, "row: {line}");
        let log_main: f64 = cols[2].parse().unwrap();
        let log_siegel: f64 = cols[4].parse().unwrap();
        assert!(log_main < log_siegel, "row: {line}");
        assert_eq!(cols[5], "akss2:4");
        rows += 1;
    }
    assert_eq!(rows, 6);
}

#[test]
fn solve_report_round_trips_its_embedded_form() {
    let form = pure7_file("solve");
    let args = ["solve", "--form", form.to_str().unwrap(), "--h", "127", "--H", "10"];
    let v = stdout_json(&bin().args(args).output().unwrap());
    assert_eq!(v["n"], 5);
    assert_eq!(v["partition"]["class_count"], 2);
    assert_eq!(v["searched_box"], 10);

    // The embedded form must itself be a valid spec file.
    let echo = serde_json::to_string(&v["form"]).unwrap();
    let echo_file = temp_file("solve-echo", &echo);
    let again = stdout_json(
        &bin()
            .args(["solve", "--form", echo_file.to_str().unwrap(), "--h", "127", "--H", "10"])
            .output()
            .unwrap(),
    );
    assert_eq!(again["solutions"], v["solutions"]);
    let _ = fs::remove_file(echo_file);
    let _ = fs::remove_file(form);
}

#[test]
fn solve_csv_lists_the_known_solutions() {
    let form = pure7_file("csv");
    let out = bin()
        .args([
            "solve",
            "--form",
            form.to_str().unwrap(),
            "--h",
            "127",
            "--H",
            "10",
            "--format",
            "csv",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[1], "x,y,F,Z,zeta,omega_index");
    let coords: Vec<String> = lines[2..]
        .iter()
        .map(|l| {
            let c: Vec<&str> = l.split(',').collect();
            format!("({},{})", c[0], c[1])
        })
        .collect();
    assert_eq!(coords, ["(0,1)", "(1,-1)", "(1,0)", "(1,2)", "(2,1)"]);
    let _ = fs::remove_file(form);
}

#[test]
fn reports_are_deterministic_modulo_timing() {
    let form = pure7_file("det");
    let args = ["partition", "--form", form.to_str().unwrap(), "--h", "127", "--H", "10"];
    let mut first = stdout_json(&bin().args(args).output().unwrap());
    let mut second = stdout_json(&bin().args(args).output().unwrap());
    first["manifest"]["timing_ms"] = Value::from(0);
    second["manifest"]["timing_ms"] = Value::from(0);
    let a = serde_json::to_string_pretty(&first).unwrap();
    let b = serde_json::to_string_pretty(&second).unwrap();
    assert_eq!(a, b);
    let _ = fs::remove_file(form);
}

#[test]
fn out_flag_writes_the_report_file() {
    let form = pure7_file("outflag");
    let out_path = std::env::temp_dir().join(format!("diagthue-out-{}.json", std::process::id()));
    let out = bin()
        .args([
            "expand",
            "--form",
            form.to_str().unwrap(),
            "--out",
            out_path.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(v["expanded"]["coeffs"][0], "1");
    assert_eq!(v["expanded"]["coeffs"][7], "-1");
    assert_eq!(v["manifest"]["outputs"][0], out_path.to_str().unwrap());
    let _ = fs::remove_file(out_path);
    let _ = fs::remove_file(form);
}

#[test]
fn verify_lemmas_passes_on_the_worked_example() {
    let form = pure7_file("lemmas");
    let out = bin()
        .args(["verify-lemmas", "--form", form.to_str().unwrap(), "--h", "127", "--H", "10"])
        .output()
        .unwrap();
    let v = stdout_json(&out);
    assert_eq!(v["violated"], 0);
    assert!(v["checks"].as_u64().unwrap() > 0);
    let _ = fs::remove_file(form);
}

#[test]
fn zk_reports_when_no_class_of_three_exists() {
    let form = pure7_file("zk");
    let out = bin()
        .args(["zk", "--form", form.to_str().unwrap(), "--h", "127", "--H", "10"])
        .output()
        .unwrap();
    let v = stdout_json(&out);
    assert_eq!(v["evaluated"], 0);
    assert!(v["note"].as_str().unwrap().contains("no class"));
    let _ = fs::remove_file(form);
}

#[test]
fn domain_errors_exit_one_with_structured_stderr() {
    let form = temp_file(
        "interr",
        r#"{"kind": "integer", "r": 7, "coeffs": ["1","0","0","0","0","0","0","-1"]}"#,
    );
    let out = bin()
        .args(["invariants", "--form", form.to_str().unwrap(), "--h", "1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&out.stderr).expect("stderr is JSON");
    assert_eq!(err["error"]["kind"], "invalid_spec");
    let _ = fs::remove_file(form);
}

#[test]
fn usage_errors_exit_two() {
    let form = pure7_file("usage");
    let bad_theorem = bin()
        .args(["check", "--form", form.to_str().unwrap(), "--h", "1", "--theorem", "bogus"])
        .output()
        .unwrap();
    assert_eq!(bad_theorem.status.code(), Some(2));

    let missing_args = bin().args(["solve"]).output().unwrap();
    assert_eq!(missing_args.status.code(), Some(2));

    let bad_env = bin()
        .args(["table", "--r", "7", "--h", "1"])
        .env("DIAGTHUE_DIGIT_BUDGET", "many")
        .output()
        .unwrap();
    assert_eq!(bad_env.status.code(), Some(2));
    let _ = fs::remove_file(form);
}

#[test]
fn check_reports_hypothesis_and_count_consistency() {
    let form = temp_file(
        "check",
        r#"{"r": 7, "alpha": "1", "beta": "3000000", "gamma": "1", "delta": "-3000000"}"#,
    );
    let out = bin()
        .args([
            "check",
            "--form",
            form.to_str().unwrap(),
            "--h",
            "1",
            "--theorem",
            "main",
            "--H",
            "50",
        ])
        .output()
        .unwrap();
    let v = stdout_json(&out);
    assert_eq!(v["hypothesis"]["verdict"], true);
    assert_eq!(v["hypothesis"]["predicted_bound"], 2);
    assert_eq!(v["hypothesis"]["case_row"], "D_POS_ODD_INDEF");
    assert_eq!(v["consistency"]["covered"], true);
    assert_eq!(v["n"], 0);
    let _ = fs::remove_file(form);
}

#[test]
fn quadratic_field_form_files_parse_and_solve() {
    let form = temp_file(
        "quad",
        r#"{
            "kind": "diagonal",
            "r": 7,
            "d": -1,
            "alpha": {"a": "1"},
            "beta": {"b": "1"},
            "gamma": {"a": "-1"},
            "delta": {"b": "1"}
        }"#,
    );
    let out = bin()
        .args(["solve", "--form", form.to_str().unwrap(), "--h", "2", "--H", "50"])
        .output()
        .unwrap();
    let v = stdout_json(&out);
    assert_eq!(v["n"], 1);
    assert_eq!(v["solutions"][0]["x"], 1);
    assert_eq!(v["solutions"][0]["y"], 0);
    let _ = fs::remove_file(form);
}
