use std::process::{Command, Output};

fn genfrac(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_genfrac"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn value_line(o: &Output) -> f64 {
    let text = stdout(o);
    let line = text.lines().find(|l| l.starts_with("value = ")).expect("value line");
    line["value = ".len()..].parse().unwrap()
}

const RL_HALF: [&str; 10] = ["--alpha", "0.5", "--beta", "0.5", "--rho", "1", "--eta", "0", "--kappa", "0"];

#[test]
fn eval_examples() {
    let o = genfrac(&[
        "eval", "--alpha", "1", "--beta", "1", "--rho", "1", "--eta", "0", "--kappa", "0", "--a", "0", "--x", "2", "--fn",
        "const:1",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!((value_line(&o) - 2.0).abs() < 1e-12);
    assert!(stdout(&o).contains("error_estimate = "));
    assert!(stdout(&o).contains("evaluations = "));

    let mut args = vec!["eval"];
    args.extend(RL_HALF);
    args.extend(["--a", "0", "--x", "1", "--fn", "const:1"]);
    let o = genfrac(&args);
    assert_eq!(o.status.code(), Some(0));
    assert!((value_line(&o) - 1.128_379_167_1).abs() < 1e-10);
}

#[test]
fn eval_right_side() {
    let mut args = vec!["eval"];
    args.extend(RL_HALF);
    args.extend(["--side", "right", "--b", "1.5", "--x", "0.5", "--fn", "const:1"]);
    let o = genfrac(&args);
    assert_eq!(o.status.code(), Some(0), "{o:?}");
    assert!((value_line(&o) - 1.128_379_167_095_512_6).abs() < 1e-10);
}

#[test]
fn eval_invalid_parameters_exit_2() {
    let o = genfrac(&[
        "eval", "--alpha", "-1", "--beta", "0.5", "--rho", "1", "--eta", "0", "--kappa", "0", "--a", "0", "--x", "1",
        "--fn", "const:1",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("alpha must be positive"));

    let mut args = vec!["eval"];
    args.extend(RL_HALF);
    args.extend(["--a", "0", "--x", "1", "--fn", "const:1 + wobble:3"]);
    let o = genfrac(&args);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("wobble:3"));
}

#[test]
fn eval_non_convergence_exit_3() {
    let mut args = vec!["eval"];
    args.extend(RL_HALF);
    args.extend([
        "--a", "0", "--x", "1", "--fn", "sinpos:40,0,1,2", "--rel-tol", "1e-15", "--abs-tol", "1e-300",
        "--max-subdivisions", "1",
    ]);
    let o = genfrac(&args);
    assert_eq!(o.status.code(), Some(3), "{o:?}");
    assert!(stdout(&o).contains("value = "));
}

#[test]
fn reduce_examples() {
    let cases: [(&[&str], &str); 6] = [
        (&RL_HALF, "riemann-liouville"),
        (&["--alpha", "0.5", "--beta", "0", "--rho", "2", "--eta", "0.3", "--kappa", "-1.6"], "erdelyi-kober"),
        (&["--alpha", "0.5", "--beta", "0.5", "--rho", "2", "--eta", "0", "--kappa", "0"], "katugampola"),
        (&["--alpha", "0.7", "--beta", "0.3", "--rho", "1.5", "--eta", "0.5", "--kappa", "0.8"], "generalized"),
        (&["--alpha", "0.5", "--beta", "0.5", "--rho", "1", "--eta", "0", "--kappa", "0", "--a", "-inf"], "weyl"),
        (&["--alpha", "0.5", "--beta", "0.5", "--rho", "1", "--eta", "0", "--kappa", "0", "--side", "right"], "liouville"),
    ];
    for (params, want) in cases {
        let mut args = vec!["reduce"];
        args.extend(params);
        let o = genfrac(&args);
        assert_eq!(o.status.code(), Some(0));
        assert_eq!(stdout(&o).trim(), want, "{params:?}");
    }
}

#[test]
fn reduce_flags_hadamard_approach() {
    let o = genfrac(&["reduce", "--alpha", "0.5", "--beta", "0.5", "--rho", "0.001", "--eta", "0", "--kappa", "0", "--a", "1"]);
    assert_eq!(stdout(&o).trim(), "katugampola");
    assert!(String::from_utf8_lossy(&o.stderr).contains("Hadamard"));
}

#[test]
fn oracle_passes() {
    let o = genfrac(&["oracle"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("points = 540"));
}

#[test]
fn verify_single_theorem() {
    let o = genfrac(&["verify", "--theorem", "8", "--trials", "100", "--seed", "1", "--p", "2", "--m", "0.5", "--M", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["summaries"][0]["trials"], 100);
    assert_eq!(report["summaries"][0]["passes"], 100);
}

#[test]
fn verify_all_equality_band_is_tight() {
    let o = genfrac(&["verify", "--theorem", "all", "--trials", "10", "--seed", "1", "--p", "2", "--m", "1", "--M", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    for r in report["trials"].as_array().unwrap() {
        if ["T8", "T9", "T14", "T15"].contains(&r["theorem"].as_str().unwrap()) {
            let margin = r["check"]["margin"].as_f64().unwrap();
            assert!(margin.abs() <= 1e-10, "{r}");
        }
    }
}

#[test]
fn verify_missing_m_exit_2() {
    let o = genfrac(&["verify", "--theorem", "8", "--trials", "10", "--seed", "1", "--p", "2", "--M", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_bad_values_exit_2() {
    let o = genfrac(&["verify", "--theorem", "8", "--p", "2", "--m", "2", "--M", "1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = genfrac(&["verify", "--theorem", "12", "--p", "2", "--m", "0.5", "--M", "2", "--c", "0.7"]);
    assert_eq!(o.status.code(), Some(2));
    let o = genfrac(&["verify", "--theorem", "16", "--p", "2", "--m", "0.5", "--M", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_writes_json_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("r.json");
    let csv = dir.path().join("r.csv");
    let o = genfrac(&[
        "verify", "--theorem", "13", "--trials", "20", "--seed", "4", "--p", "1,3", "--m", "0.5", "--M", "2", "--json",
        json.to_str().unwrap(), "--csv", csv.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert!(String::from_utf8_lossy(&o.stderr).contains("T13: trials=20"));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(report["tool"], "genfrac");
    assert!(report["timestamp"].is_string());
    assert_eq!(std::fs::read_to_string(&csv).unwrap().lines().count(), 21);
}

#[test]
fn verify_statement_constants_flag() {
    let o = genfrac(&[
        "verify", "--theorem", "11", "--trials", "20", "--seed", "2", "--p", "3", "--m", "0.5", "--M", "2",
        "--paper-statement-constants",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["grid"]["paper_statement_constants"], true);
    // q = 3/2: printed c4 = 2^2 / (q (m+1)^q)
    let c4 = report["trials"][0]["check"]["constant_upper"].as_f64().unwrap();
    let want = 4.0 / (1.5 * 1.5f64.powf(1.5));
    assert!((c4 - want).abs() < 1e-14);
}
