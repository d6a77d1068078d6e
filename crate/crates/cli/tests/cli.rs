//! End-to-end tests of the installed binary: output schemas, reference
//! values, exit codes, config merging, and determinism across thread
//! counts.

use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_ptlattice"));
    cmd.env_remove("PTLATTICE_THREADS");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary spawns")
}

fn run_ok(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "command {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf-8 output")
}

fn run_code(args: &[&str]) -> i32 {
    run(args).status.code().expect("exit code")
}

fn json(args: &[&str]) -> Value {
    serde_json::from_str(&run_ok(args)).expect("json output")
}

/// Data lines of a CSV document: comments and blanks stripped, header(s)
/// included.
fn csv_lines(text: &str) -> Vec<&str> {
    text.lines().filter(|l| !l.is_empty() && !l.starts_with('#')).collect()
}

#[test]
fn alpha_record_and_meta() {
    let v = json(&["alpha", "--n", "6", "--z", "3"]);
    assert!((v["alpha"].as_f64().unwrap() - 0.011344897).abs() < 1e-7);
    assert!((v["degenerate_energy"].as_f64().unwrap() - 2.0).abs() < 1e-3);
    let meta = &v["meta"];
    assert!(meta["tool"].as_str().unwrap().starts_with("ptlattice "));
    assert_eq!(meta["config"]["n"], Value::from(6));
    assert_eq!(meta["tolerances"]["alpha"].as_f64().unwrap(), 1e-10);
}

#[test]
fn alpha_two_site() {
    let v = json(&["alpha", "--n", "2", "--z", "3"]);
    assert!((v["alpha"].as_f64().unwrap() - 1.0).abs() < 1e-8);
    assert!((v["degenerate_energy"].as_f64().unwrap() - 2.0).abs() < 1e-6);
}

#[test]
fn alpha_four_site_flat_weights() {
    let v = json(&["alpha", "--n", "4", "--z", "0"]);
    let quarter_root5 = 5f64.sqrt() / 4.0;
    assert!((v["alpha"].as_f64().unwrap() - quarter_root5).abs() < 1e-9);
}

#[test]
fn spectrum_circle_relation() {
    let text = run_ok(&[
        "spectrum", "--n", "2", "--z", "3", "--a-min", "-1", "--a-max", "1", "--steps", "101",
    ]);
    let lines = csv_lines(&text);
    assert_eq!(lines[0], "a,index,re,im,is_real");
    let rows = &lines[1..];
    assert_eq!(rows.len(), 101 * 2);
    let mut previous: Option<(f64, usize)> = None;
    for row in rows {
        let fields: Vec<&str> = row.split(',').collect();
        let a: f64 = fields[0].parse().unwrap();
        let index: usize = fields[1].parse().unwrap();
        let re: f64 = fields[2].parse().unwrap();
        let is_real: bool = fields[4].parse().unwrap();
        if let Some(prev) = previous {
            assert!(prev <= (a, index), "rows sorted by (a, index)");
        }
        previous = Some((a, index));
        if is_real {
            // the two real branches trace the circle (ε − 2)² + a² = 1
            assert!(((re - 2.0).powi(2) + a * a - 1.0).abs() < 1e-9, "row {row}");
        }
    }
}

#[test]
fn spectrum_json_format() {
    let v = json(&[
        "spectrum", "--n", "2", "--z", "3", "--a-min", "-1", "--a-max", "1", "--steps", "11",
        "--format", "json",
    ]);
    assert_eq!(v["rows"].as_array().unwrap().len(), 22);
    assert!(v["meta"]["config"]["steps"].as_u64().unwrap() == 11);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run_code(&["spectrum", "--n", "2", "--z", "3", "--steps", "1"]), 2);
    assert_eq!(
        run_code(&["spectrum", "--n", "2", "--z", "3", "--a-min", "1", "--a-max", "-1"]),
        2
    );
    assert_eq!(run_code(&["alpha", "--n", "3", "--z", "3"]), 2, "odd dimension");
    assert_eq!(run_code(&["alpha", "--z", "3"]), 2, "missing --n");
    assert_eq!(run_code(&["alpha", "--n", "2", "--z", "3", "--format", "csv"]), 2);
    assert_eq!(run_code(&["tables", "--format", "json"]), 2);
}

#[test]
fn numerical_failure_exits_3() {
    assert_eq!(run_code(&["charge", "--n", "2", "--a", "1.5"]), 3);
}

#[test]
fn io_failure_exits_4() {
    assert_eq!(
        run_code(&[
            "alpha", "--n", "2", "--z", "3", "--output", "/nonexistent-dir-ptl/out.json",
        ]),
        4
    );
    assert_eq!(run_code(&["alpha", "--n", "2", "--z", "3", "--config", "/no-such-cfg.json"]), 4);
}

#[test]
fn identical_output_across_thread_counts() {
    let args = ["spectrum", "--n", "4", "--z", "3", "--a-min", "-0.05", "--a-max", "0.05",
        "--steps", "51"];
    let one = run_ok(&[&args[..], &["--threads", "1"]].concat());
    let four = run_ok(&[&args[..], &["--threads", "4"]].concat());
    assert_eq!(one, four, "thread count changed output bytes");

    // writing to a file produces the same bytes as stdout
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.csv");
    let out = run(&[&args[..], &["--output", path.to_str().unwrap()]].concat());
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), one);
}

#[test]
fn thread_env_default_and_flag_precedence() {
    let args = ["alpha", "--n", "2", "--z", "3"];
    // flag wins: the unparseable environment value is never consulted
    let out = bin().args(args).env("PTLATTICE_THREADS", "junk").arg("--threads").arg("2")
        .output().unwrap();
    assert!(out.status.success());
    // without the flag the environment value is used, and rejected
    let out = bin().args(args).env("PTLATTICE_THREADS", "junk").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    // a valid environment value works
    let out = bin().args(args).env("PTLATTICE_THREADS", "1").output().unwrap();
    assert!(out.status.success());
}

#[test]
fn config_file_defaults_and_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cfg.json");
    std::fs::write(&path, r#"{"n": 2, "z": 3.0}"#).unwrap();
    let cfg = path.to_str().unwrap();

    let v = json(&["alpha", "--config", cfg]);
    assert_eq!(v["n"], Value::from(2));
    assert!((v["alpha"].as_f64().unwrap() - 1.0).abs() < 1e-8);

    let v = json(&["alpha", "--config", cfg, "--n", "6"]);
    assert_eq!(v["n"], Value::from(6), "explicit flag overrides config file");
    assert!((v["alpha"].as_f64().unwrap() - 0.011344897).abs() < 1e-7);
}

#[test]
fn classify_eight_site() {
    let v = json(&["classify", "--n", "8", "--z", "4.5"]);
    assert_eq!(v["pattern"].as_str().unwrap(), "E(E(E(C)))");
}

#[test]
fn zcritical_brackets_one_boundary() {
    let v = json(&[
        "zcritical", "--n", "8", "--z-min", "3.9", "--z-max", "4.1", "--tol", "1e-3",
    ]);
    let boundaries = v["boundaries"].as_array().unwrap();
    assert_eq!(boundaries.len(), 1);
    assert!((boundaries[0].as_f64().unwrap() - 3.982).abs() < 5e-3);
    let patterns: Vec<&str> =
        v["patterns"].as_array().unwrap().iter().map(|p| p.as_str().unwrap()).collect();
    assert_eq!(patterns, ["E(E(E(C)))", "E(E(V(C,C)))"]);
}

#[test]
fn secular_polynomials() {
    let v = json(&["secular", "--n", "6"]);
    assert_eq!(v["coefficients"], serde_json::json!([1.0, 0.0, -26.0, 0.0, 181.0, 0.0, -225.0]));

    let v = json(&["secular", "--n", "8"]);
    assert_eq!(
        v["coefficients"],
        serde_json::json!([1.0, 0.0, -70.0, 0.0, 1487.0, 0.0, -9139.0, 0.0, 11025.0])
    );
    let roots = v["positive_roots"].as_array().unwrap();
    assert_eq!(roots.len(), 4);
    assert!((roots[3].as_f64().unwrap() - 5.762552919).abs() < 1e-6);
}

#[test]
fn beta_six_site() {
    let v = json(&["beta", "--n", "6"]);
    assert!((v["beta"].as_f64().unwrap() - 0.2718445).abs() < 1e-6);
    assert!((v["linear_estimate"].as_f64().unwrap() - 1.0 / 3.846027361).abs() < 1e-9);
}

#[test]
fn charge_at_zero_is_parity() {
    let v = json(&["charge", "--n", "2", "--a", "0"]);
    assert_eq!(
        v["matrix"]["data"],
        serde_json::json!([[0.0, 0.0], [1.0, 0.0], [1.0, 0.0], [0.0, 0.0]])
    );
}

#[test]
fn metric_basis_family() {
    let v = json(&["metric-basis", "--n", "4", "--a", "0.01", "--z", "3"]);
    assert_eq!(v["dim"], Value::from(4));
    assert!(v["warning"].is_null());
    let basis = v["basis"].as_array().unwrap();
    assert_eq!(basis.len(), 4);
    for m in basis {
        assert_eq!(m["rows"], Value::from(4));
        assert_eq!(m["data"].as_array().unwrap().len(), 16);
    }
    for r in v["residuals"].as_array().unwrap() {
        assert!(r.as_f64().unwrap() < 1e-8);
    }
}

#[test]
fn linearized_is_imaginary_integer_antisymmetric() {
    let v = json(&["linearized", "--n", "6"]);
    let data = v["matrix"]["data"].as_array().unwrap();
    assert_eq!(data.len(), 36);
    for (q, entry) in data.iter().enumerate() {
        let re = entry[0].as_f64().unwrap();
        let im = entry[1].as_f64().unwrap();
        assert_eq!(re, 0.0, "entry {q} has a real part");
        assert!((im - im.round()).abs() < 1e-9, "entry {q} is not an integer multiple of i");
        // Hermitian with purely imaginary entries: antisymmetric imaginary part
        let mirrored = data[(q % 6) * 6 + q / 6][1].as_f64().unwrap();
        assert!((im + mirrored).abs() < 1e-12);
    }
}

#[test]
fn observables_span_full_algebra() {
    let v = json(&["observables", "--n", "2", "--a", "0.4"]);
    assert_eq!(v["dim"], Value::from(4));
    assert_eq!(v["basis"].as_array().unwrap().len(), 4);
}

#[test]
fn reality_two_site_boundary() {
    let text = run_ok(&["reality", "--n", "2", "--z", "3", "--a-cap", "2"]);
    let lines = csv_lines(&text);
    assert_eq!(lines[0], "a_lo,a_hi,real_count");
    assert_eq!(lines.len(), 3, "two intervals on [0, 2]");
    let first: Vec<&str> = lines[1].split(',').collect();
    let second: Vec<&str> = lines[2].split(',').collect();
    assert_eq!(first[2], "2");
    assert_eq!(second[2], "0");
    let edge: f64 = first[1].parse().unwrap();
    assert!((edge - 1.0).abs() < 1e-6, "reality edge at the exceptional point");
}

#[test]
fn anomalies_absent_for_two_site() {
    let text = run_ok(&["anomalies", "--n", "2", "--z", "3"]);
    let lines = csv_lines(&text);
    assert_eq!(lines, ["a_lo,a_hi,real_count"], "header only: no islands");
}

#[test]
fn tables_fibonacci() {
    let text = run_ok(&["tables", "--table", "fibonacci"]);
    let lines = csv_lines(&text);
    assert_eq!(lines[0], "k,count,reference,deviation");
    let expected = ["1,1,1,0", "2,2,2,0", "3,3,3,0", "4,5,5,0", "5,8,8,0", "6,13,13,0"];
    assert_eq!(&lines[1..], &expected);
}

#[test]
fn tables_alpha_deviations_small() {
    let text = run_ok(&["tables", "--table", "alpha"]);
    let lines = csv_lines(&text);
    assert_eq!(
        lines[0],
        "n,z,alpha,reference,deviation,energy,energy_reference,energy_deviation"
    );
    assert_eq!(lines.len(), 8);
    for row in &lines[1..] {
        let fields: Vec<&str> = row.split(',').collect();
        let deviation: f64 = fields[4].parse().unwrap();
        let energy_deviation: f64 = fields[7].parse().unwrap();
        assert!(deviation <= 1e-7, "row {row}");
        assert!(energy_deviation <= 1e-3, "row {row}");
    }
}
