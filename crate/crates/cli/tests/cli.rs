// SPDX-License-Identifier: Apache-2.0

//! End-to-end runs of the `vetolab` binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn vetolab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vetolab"))
        .args(args)
        .env_remove("VETOLAB_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

/// Three voters over `a = 0` and `b = 1`; the first ranks `a` first.
const THREE_VOTERS: &str = "3 2\n0 1\n1 0\n1 0\n";

#[test]
fn core_lists_a_under_skewed_weights() {
    let dir = TempDir::new().unwrap();
    let profile = write(dir.path(), "three.profile", THREE_VOTERS);
    let weights = write(dir.path(), "three.weights", "p: 1/3 1/3 1/3\nq: 2/3 1/3\n");
    let out = vetolab(&["core", "--profile", &profile, "--weights", &weights]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    let core_line = text.lines().find(|l| l.starts_with("core ")).unwrap();
    assert!(
        core_line.split_whitespace().skip(1).any(|c| c == "0"),
        "{text}"
    );
    assert!(text.contains("mu 1/2"));
    assert!(text.contains("candidate 0\n"));
}

#[test]
fn core_with_one_candidate() {
    let dir = TempDir::new().unwrap();
    let profile = write(dir.path(), "one.profile", "2 1\n0\n0\n");
    let out = vetolab(&["core", "--profile", &profile]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("core 0\n"));
}

#[test]
fn malformed_ranking_exits_2_with_line() {
    let dir = TempDir::new().unwrap();
    let profile = write(dir.path(), "bad.profile", "2 2\n0 1\n# comment\n1 1\n");
    let out = vetolab(&["core", "--profile", &profile]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 4"), "{}", stderr(&out));
}

#[test]
fn bad_rational_flag_exits_2() {
    let out = vetolab(&["bounds", "--delta", "0.5"]);
    assert_eq!(out.status.code(), Some(2));
    let out = vetolab(&["bounds", "--delta", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("delta"));
}

#[test]
fn thread_variable_is_validated() {
    let out = Command::new(env!("CARGO_BIN_EXE_vetolab"))
        .args(["sweep-delta", "--samples", "1", "--n", "3", "--m", "2"])
        .env("VETOLAB_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bounds_point_and_curves() {
    let out = vetolab(&["bounds", "--delta", "1/3", "--eta", "2", "--alpha", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let header: Vec<&str> = text.lines().next().unwrap().split(',').collect();
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    let get = |name: &str| {
        row[header
            .iter()
            .position(|h| h.starts_with(&format!("{name}[")))
            .unwrap()]
    };
    assert_eq!(get("consistency_bound_exact"), "2");
    assert_eq!(get("robustness_bound_exact"), "5");
    assert_eq!(get("error_bound_exact"), "3");

    let out = vetolab(&[
        "bounds", "--curve", "alpha", "--alpha", "0", "--grid", "0,1/3",
    ]);
    let text = stdout(&out);
    assert!(
        text.lines().nth(1).unwrap().starts_with("0,0,0,0,2,2,2,2"),
        "{text}"
    );
}

#[test]
fn bounds_svg_is_written() {
    let dir = TempDir::new().unwrap();
    let svg = dir.path().join("chart.svg");
    let out = vetolab(&["bounds", "--curve", "eta", "--svg", svg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(svg).unwrap();
    assert_eq!(text.matches("<polyline").count(), 4);
}

#[test]
fn sweep_delta_is_byte_identical_across_runs_and_threads() {
    let args = [
        "sweep-delta",
        "--samples",
        "4",
        "--seed",
        "11",
        "--n",
        "4",
        "--m",
        "3",
    ];
    let one = Command::new(env!("CARGO_BIN_EXE_vetolab"))
        .args(args)
        .env("VETOLAB_THREADS", "1")
        .output()
        .unwrap();
    let two = Command::new(env!("CARGO_BIN_EXE_vetolab"))
        .args(args)
        .env("VETOLAB_THREADS", "3")
        .output()
        .unwrap();
    assert_eq!(one.status.code(), Some(0), "{}", stderr(&one));
    assert_eq!(one.stdout, two.stdout);
    let text = stdout(&one);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 5);
    assert!(lines[1].starts_with("0,0,3,3,3,3,"), "{}", lines[1]);
    assert!(
        lines[3].starts_with("0.333333333333,1/3,2,2,5,5,"),
        "{}",
        lines[3]
    );
    assert!(lines[1..].iter().all(|l| l.ends_with(",true")));
}

#[test]
fn verify_exit_codes() {
    let out = vetolab(&["verify", "matching", "--samples", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["passed"], true);
    assert_eq!(json["suites"][0]["suite"], "matching");

    let out = vetolab(&["verify", "tight-instances"]);
    assert_eq!(out.status.code(), Some(0));

    let out = vetolab(&["verify", "no-such-suite"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("unknown suite"));

    // The pair's second ratio is strictly above the proof's lower bound.
    let out = vetolab(&["verify", "impossibility"]);
    assert_eq!(out.status.code(), Some(1));
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let violations = json["suites"][0]["violations"].as_array().unwrap();
    assert!(violations.iter().all(|v| v["check"] == "i2-equals-ratio"));
}

#[test]
fn gen_then_distortion_round_trip() {
    let dir = TempDir::new().unwrap();
    let d = dir.path().to_str().unwrap();
    let out = vetolab(&[
        "gen",
        "--family",
        "tight",
        "--out",
        d,
        "--mu",
        "1/2",
        "--lambda",
        "1",
        "--n",
        "3",
        "--epsilon",
        "1/10",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let manifest = fs::read_to_string(dir.path().join("tight.manifest")).unwrap();
    assert!(manifest.contains("mu = 1/2") && manifest.contains("certificate ="));
    let metric = dir.path().join("tight.metric");
    let profile = dir.path().join("tight.profile");
    let out = vetolab(&[
        "distortion",
        "--metric",
        metric.to_str().unwrap(),
        "--profile",
        profile.to_str().unwrap(),
        "--candidate",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    // 1 + 2λ/μ − ε(μ+λ)/μ = 5 − 3/10.
    assert_eq!(stdout(&out), "candidate,value\n1,47/10\n");

    let witness = dir.path().join("w.metric");
    let out = vetolab(&[
        "distortion",
        "--profile",
        profile.to_str().unwrap(),
        "--candidate",
        "1",
        "--grid",
        "8",
        "--witness",
        witness.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(
        text.starts_with("candidate,value,reference,line_oracle\n1,"),
        "{text}"
    );
    assert!(fs::read_to_string(witness).unwrap().starts_with("3 2\n"));
}

#[test]
fn gen_impossibility_writes_both_instances() {
    let dir = TempDir::new().unwrap();
    let d = dir.path().to_str().unwrap();
    let out = vetolab(&[
        "gen",
        "--family",
        "impossibility",
        "--out",
        d,
        "--n",
        "4",
        "--delta",
        "1/3",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let p1 = fs::read_to_string(dir.path().join("impossibility-1.profile")).unwrap();
    let p2 = fs::read_to_string(dir.path().join("impossibility-2.profile")).unwrap();
    assert_eq!(p1, p2);
}

#[test]
fn simveto_writes_trace_and_f_matrix() {
    let dir = TempDir::new().unwrap();
    let profile = write(
        dir.path(),
        "p.profile",
        "3 5\n0 3 1 2 4\n1 3 0 2 4\n2 0 1 3 4\n",
    );
    let trace = dir.path().join("trace.csv");
    let f = dir.path().join("f.csv");
    let out = vetolab(&[
        "simveto",
        "--profile",
        &profile,
        "--predicted",
        "3",
        "--delta",
        "1/3",
        "--out",
        trace.to_str().unwrap(),
        "--f-matrix",
        f.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).starts_with("winner 3 predicted 3 delta 1/3 rounds 3 boost 3 rate 2"));
    let trace = fs::read_to_string(trace).unwrap();
    assert_eq!(trace.lines().count(), 4);
    assert!(trace.lines().last().unwrap().starts_with("3,3/4,1,"));
    assert_eq!(fs::read_to_string(f).unwrap().lines().count(), 4);
}

#[test]
fn simveto_rejects_out_of_range_prediction() {
    let dir = TempDir::new().unwrap();
    let profile = write(dir.path(), "p.profile", THREE_VOTERS);
    let out = vetolab(&["simveto", "--profile", &profile, "--predicted", "7"]);
    assert_eq!(out.status.code(), Some(2));
}
