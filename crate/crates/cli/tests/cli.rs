use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn srlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_srlab"))
        .args(args)
        .env_remove("SRLAB_SEED")
        .output()
        .expect("binary runs")
}

fn report(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).expect("report written"))
        .expect("report is JSON")
}

fn suite_passed(r: &Value, name: &str) -> bool {
    r["suites"]
        .as_array()
        .unwrap()
        .iter()
        .find(|s| s["suite"] == name)
        .expect("suite present")["passed"]
        .as_bool()
        .unwrap()
}

#[test]
fn same_seed_gives_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    let args = [
        "--suite",
        "scalars,roots,folding,field,appendix,embedding",
        "--samples",
        "10",
        "--seed",
        "7",
    ];
    for p in [&a, &b] {
        let mut v = args.to_vec();
        v.extend(["--out", p.to_str().unwrap()]);
        assert_eq!(srlab(&v).status.code(), Some(0));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn thread_count_does_not_change_the_report() {
    let one = srlab(&["--suite", "field,roots", "--samples", "10", "--jobs", "1"]);
    let two = srlab(&["--suite", "roots,field", "--samples", "10", "--jobs", "3"]);
    assert_eq!(one.stdout, two.stdout);
}

#[test]
fn zero_samples_is_a_config_error() {
    let out = srlab(&["--samples", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("config error"));
}

#[test]
fn bad_config_values_exit_2() {
    assert_eq!(srlab(&["--case", "X"]).status.code(), Some(2));
    assert_eq!(srlab(&["--suite", "nope"]).status.code(), Some(2));
    assert_eq!(
        srlab(&["--case", "B", "--set", "char=3"]).status.code(),
        Some(2)
    );
    assert_eq!(srlab(&["/nonexistent/config"]).status.code(), Some(2));
}

#[test]
fn corrupted_signs_fail_axioms_but_not_appendix() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let status = srlab(&[
        "--suite",
        "appendix,valuation-axioms",
        "--samples",
        "5",
        "--corrupt-signs",
        "--out",
        out.to_str().unwrap(),
    ])
    .status;
    assert_eq!(status.code(), Some(1));
    let r = report(&out);
    assert!(suite_passed(&r, "appendix"));
    assert!(!suite_passed(&r, "valuation-axioms"));
    let v3_failed: u64 = r["records"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|x| x["property"] == "V3")
        .map(|x| x["failed"].as_u64().unwrap())
        .sum();
    assert!(v3_failed > 0);
}

#[test]
fn passing_subset_exits_0() {
    let out = srlab(&["--suite", "scalars", "--suite", "folding", "--samples", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    let names: Vec<_> = r["suites"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["suite"].as_str().unwrap())
        .collect();
    assert_eq!(names, ["scalars", "folding"]);
    assert_eq!(r["passed"], true);
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(
        &cfg,
        "# quick run\ncase = B\nsamples = 3\nseed = 11\nsuites = roots\n",
    )
    .unwrap();
    let out = srlab(&[cfg.to_str().unwrap(), "--seed", "12"]);
    assert_eq!(out.status.code(), Some(0));
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["case"], "B");
    assert_eq!(r["samples"], 3);
    assert_eq!(r["seed"], 12);
}

#[test]
fn seed_falls_back_to_the_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_srlab"))
        .args(["--suite", "roots", "--samples", "2"])
        .env("SRLAB_SEED", "99")
        .output()
        .unwrap();
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["seed"], 99);
    let flag = Command::new(env!("CARGO_BIN_EXE_srlab"))
        .args(["--suite", "roots", "--samples", "2", "--seed", "5"])
        .env("SRLAB_SEED", "99")
        .output()
        .unwrap();
    let r: Value = serde_json::from_slice(&flag.stdout).unwrap();
    assert_eq!(r["seed"], 5);
}

#[test]
fn case_b_and_f_run_the_suzuki_surface() {
    for case in ["B", "F"] {
        let out = srlab(&[
            "--case",
            case,
            "--suite",
            "embedding,moufang",
            "--samples",
            "5",
        ]);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
        let r: Value = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(
            r["suzuki_coefficients"].as_str().map(|s| s.contains("c2")),
            Some(true)
        );
    }
}

#[test]
fn moufang_stats_at_q3() {
    let out = srlab(&["moufang-stats", "--m", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let s: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(s["order"], 1512);
    assert_eq!(s["points"], 28);
    assert_eq!(s["point_stabilizer_order"], 54);
    assert_eq!(s["two_point_stabilizer_order"], 2);
    assert!(s["transitivity_degree"].as_u64().unwrap() >= 2);
}
