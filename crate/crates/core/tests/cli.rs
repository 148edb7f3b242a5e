use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn corpus(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus").join(rel)
}

fn pzeta(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pzeta"))
        .args(args)
        .output()
        .expect("run pzeta")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON report on stdout")
}

fn scratch(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("pzeta-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

#[test]
fn count_reports_exact_counts() {
    let f = corpus("varieties/diagonal_f2_12.json");
    let out = pzeta(&["count", f.to_str().unwrap(), "-k", "4"]);
    assert_eq!(code(&out), 0);
    let r = json(&out);
    assert_eq!(r["status"], "ok");
    assert_eq!(r["command"], "count");
    assert_eq!(r["outputs"]["counts"], serde_json::json!([2, 4, 8, 16]));
    assert_eq!(r["input"]["sha256"].as_str().unwrap().len(), 64);
    assert!(r["execution"]["wall_ms"].is_number());
}

#[test]
fn zeta_certifies_a_curve() {
    let f = corpus("varieties/elliptic_f2.json");
    let out = pzeta(&["zeta", f.to_str().unwrap(), "--fresh", "2"]);
    assert_eq!(code(&out), 0);
    let o = &json(&out)["outputs"];
    assert_eq!(o["function"]["numerator"], serde_json::json!(["1", "0", "2"]));
    assert_eq!(o["function"]["denominator"], serde_json::json!(["1", "-2"]));
    assert_eq!(o["weights"]["pass"], true);
    assert_eq!(o["series_integral"], true);
    let fresh = o["fresh"].as_array().unwrap();
    assert_eq!(fresh.len(), 2);
    assert!(fresh.iter().all(|f| f["agrees"] == true));
}

#[test]
fn other_subcommands_succeed() {
    let cases: [(&str, &str, &[&str]); 4] = [
        ("faltings", "varieties/sqrt2_f3_2.json", &["--k-max", "2"]),
        ("graph", "graphs/three_cycle.json", &["--k-max", "3"]),
        ("as", "artin_schreier/cubic_f2_d1.json", &[]),
        ("sweep", "varieties/diagonal_f2_11.json", &["--profiles", "1,1;1,2;2,3"]),
    ];
    for (cmd, file, extra) in cases {
        let f = corpus(file);
        let mut args = vec![cmd, f.to_str().unwrap()];
        args.extend_from_slice(extra);
        let out = pzeta(&args);
        assert_eq!(code(&out), 0, "{cmd}: {}", String::from_utf8_lossy(&out.stderr));
        assert_eq!(json(&out)["status"], "ok", "{cmd}");
    }
}

#[test]
fn as_sweep_over_d() {
    let f = corpus("artin_schreier/cubic_f2_d1.json");
    let out = pzeta(&["as", f.to_str().unwrap(), "--d-list", "1,2,3,4"]);
    assert_eq!(code(&out), 0);
    let entries = json(&out)["outputs"]["sweep"]["entries"].as_array().unwrap().clone();
    let smooth: Vec<bool> = entries
        .iter()
        .map(|e| e["expected_smooth"].as_bool().unwrap())
        .collect();
    assert_eq!(smooth, [true, false, true, false]);
}

#[test]
fn malformed_json_exits_2_with_position() {
    let f = scratch("truncated.json", "{\"kind\": \"variety\", \"p\": 2,\n  \"vars\": [\"x\"");
    let out = pzeta(&["count", f.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 2"), "{err}");
    assert!(out.stdout.is_empty());
}

#[test]
fn schema_violations_exit_2() {
    for (name, body) in [
        ("unknown.json", r#"{"kind": "variety", "p": 2, "vars": ["x"], "equations": [], "extra": 0}"#),
        ("badpoly.json", r#"{"kind": "variety", "p": 2, "vars": ["x"], "equations": ["x + z"]}"#),
        ("notprime.json", r#"{"kind": "variety", "p": 6, "vars": ["x"], "equations": ["x"]}"#),
        ("kind.json", r#"{"kind": "scheme", "p": 2}"#),
    ] {
        let f = scratch(name, body);
        let out = pzeta(&["count", f.to_str().unwrap()]);
        assert_eq!(code(&out), 2, "{name}");
    }
    let missing = pzeta(&["count", "/nonexistent/instance.json"]);
    assert_eq!(code(&missing), 2);
    let unknown_flag = pzeta(&["count", "--frobnicate"]);
    assert_eq!(code(&unknown_flag), 2);
}

#[test]
fn budget_exhaustion_exits_3_with_partial_report() {
    let f = corpus("varieties/plane_f2_111.json");
    let out = pzeta(&["--budget", "10", "count", f.to_str().unwrap(), "-k", "3"]);
    assert_eq!(code(&out), 3);
    let r = json(&out);
    assert_eq!(r["status"], "budget");
    assert_eq!(r["outputs"]["counts"], serde_json::json!([4]));
    assert_eq!(r["outputs"]["truncated"], true);
}

#[test]
fn budget_from_instance_file() {
    let f = scratch(
        "tight.json",
        r#"{"kind": "variety", "p": 2, "vars": ["x", "y"], "equations": ["x - y"],
            "budget": {"max_tuples": 20}}"#,
    );
    let out = pzeta(&["count", f.to_str().unwrap(), "-k", "5"]);
    assert_eq!(code(&out), 3);
    assert_eq!(json(&out)["budget"]["max_tuples"], 20);
}

#[test]
fn non_convergence_exits_4() {
    let f = corpus("varieties/elliptic_f2.json");
    let out = pzeta(&["zeta", f.to_str().unwrap(), "--max-k", "3"]);
    assert_eq!(code(&out), 4);
    let r = json(&out);
    assert_eq!(r["status"], "not-converged");
    assert_eq!(r["outputs"]["counts"], serde_json::json!([2, 8, 8]));
}

#[test]
fn failed_fresh_check_exits_5() {
    // one held-out term is not enough to pin down this series
    let f = corpus("varieties/cube_root_a_f4.json");
    let out = pzeta(&["zeta", f.to_str().unwrap(), "--holdout", "1", "--fresh", "2"]);
    assert_eq!(code(&out), 5);
    let r = json(&out);
    assert_eq!(r["outputs"]["pass"], false);
    let fresh = r["outputs"]["fresh"].as_array().unwrap();
    assert!(fresh.iter().any(|f| f["agrees"] == false));
}

#[test]
fn csv_and_table_formats() {
    let f = corpus("varieties/diagonal_f2_12.json");
    let csv = pzeta(&["--format", "csv", "count", f.to_str().unwrap(), "-k", "3"]);
    assert_eq!(code(&csv), 0);
    assert_eq!(String::from_utf8(csv.stdout).unwrap(), "k,count\n1,2\n2,4\n3,8\n");

    let table = pzeta(&["--format", "table", "count", f.to_str().unwrap(), "-k", "3"]);
    assert_eq!(code(&table), 0);
    let text = String::from_utf8(table.stdout).unwrap();
    assert!(text.contains("N_k"));
    assert!(text.lines().any(|l| l.split_whitespace().collect::<Vec<_>>() == ["3", "8"]));

    let sweep = pzeta(&[
        "--format",
        "csv",
        "--omit-execution",
        "sweep",
        f.to_str().unwrap(),
        "--profiles",
        "1,1;1,2",
    ]);
    let text = String::from_utf8(sweep.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("profile,D,B_used"));
    assert!(!text.contains("wall_ms"));
    assert_eq!(lines.filter(|l| l.contains("1/(1 - 2T)")).count(), 2);
}

#[test]
fn worker_count_does_not_change_the_report() {
    let f = corpus("varieties/hyperbola_f2_12.json");
    let run = |w: &str| {
        pzeta(&["--omit-execution", "--workers", w, "zeta", f.to_str().unwrap(), "--fresh", "1"]).stdout
    };
    let one = run("1");
    assert!(!one.is_empty());
    assert_eq!(one, run("4"));
    assert_eq!(one, run("3"));
}
