use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_blinksig"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn replays(out: &Output) {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out");
    std::fs::write(&path, &out.stdout).unwrap();
    let again = run(&["--replay", path.to_str().unwrap()]);
    assert_eq!(again.status.code(), Some(0), "{}", String::from_utf8_lossy(&again.stderr));
    assert_eq!(again.stdout, out.stdout);
}

#[test]
fn alexander_polynomials() {
    let out = run(&["alexander", &data("trefoil.json")]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["display"], "t^2 - t + 1");
    assert_eq!(v["header"]["convention"], "classical");
    replays(&out);

    let out = run(&["alexander", &data("trefoil.json"), "--convention", "paper"]);
    assert_eq!(json(&out)["display"], "t^2 + t + 1");
    assert_eq!(json(&out)["header"]["convention"], "paper");

    let out = run(&["alexander", &data("split_trefoils.json")]);
    assert_eq!(
        json(&out)["display"],
        "t1^2*t2^2 - t1^2*t2 + t1^2 - t1*t2^2 + t1*t2 - t1 + t2^2 - t2 + 1"
    );
}

#[test]
fn signature_exit_codes() {
    let out = run(&["signature", &data("trefoil.json"), "--rep", &data("angle_pi.json")]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["signature"], -2);
    assert_eq!(v["nullity"], 0);
    replays(&out);

    let out = run(&["signature", &data("trefoil.json"), "--rep", &data("angle_pi_over_3.json")]);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    assert_eq!(v["in_discriminant"], true);
    assert!(!v["ambiguity"].as_array().unwrap().is_empty());

    let out = run(&["signature", &data("split_trefoils.json"), "--rep", &data("angles_pi_pi.json")]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["signature"], -4);

    let out = run(&["signature", &data("split_trefoils.json"), "--rep", &data("su2_pair.json")]);
    assert!(matches!(out.status.code(), Some(0 | 2)));
    assert!(json(&out)["signature"].is_i64());
}

#[test]
fn validation_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"m":1,"n":1,"block_sizes":[2],"levels":{"1":[[1,2,3],[4,5,6]]}}"#).unwrap();
    let out = run(&["validate", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("non-square"));

    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&[]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["lab", "--suite", "nope"]).status.code(), Some(1));
    assert_eq!(run(&["lab", "--suite", "mirror", "--k", "4"]).status.code(), Some(1));
    assert_eq!(run(&["grid", &data("trefoil.json"), "--resolution", "1"]).status.code(), Some(1));

    let out = run(&["validate", &data("split_trefoils.json")]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["warnings"].as_array().unwrap().len(), 0);
    replays(&out);
}

#[test]
fn scans_and_grids() {
    let out = run(&["scan", &data("trefoil.json"), "--samples", "256"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("# {"));
    assert_eq!(lines[1], "s,signature,nullity,margin_H,margin_P,ambiguous");
    assert_eq!(lines.iter().filter(|l| l.starts_with("# jump ")).count(), 2);
    replays(&out);

    let out = run(&["scan", &data("trefoil.json"), "--samples", "256", "--out", "json"]);
    let jumps = json(&out)["scan"]["jumps"].as_array().unwrap().clone();
    assert_eq!(jumps.len(), 2);
    assert!((jumps[0]["s"].as_f64().unwrap() - 1.0 / 6.0).abs() < 1e-6);
    replays(&out);

    let out = run(&["grid", &data("split_trefoils.json"), "--resolution", "8"]);
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    assert_eq!(text.lines().count(), 2 + 64);
    assert_eq!(text.lines().nth(1).unwrap(), "theta1,theta2,signature,nullity,margin_H,margin_P,ambiguous");
    replays(&out);
}

#[test]
fn output_is_deterministic() {
    let args = ["scan", &data("split_trefoils.json"), "--component", "1", "--samples", "300"];
    let a = run(&args);
    let b = Command::new(env!("CARGO_BIN_EXE_blinksig"))
        .args(args)
        .env("BLINKSIG_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(a.stdout, b.stdout);

    let lab = ["lab", "--suite", "additivity", "--trials", "40", "--seed", "5"];
    assert_eq!(run(&lab).stdout, run(&lab).stdout);

    let stamped = run(&["alexander", &data("trefoil.json"), "--stamp"]);
    assert!(json(&stamped)["header"]["timestamp"].is_u64());
    assert!(json(&run(&["alexander", &data("trefoil.json")]))["header"].get("timestamp").is_none());
}

#[test]
fn lab_reports() {
    let out = run(&["lab", "--suite", "metabolic-vanishing", "--trials", "200", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["report"]["passed"], true);
    replays(&out);

    let out = run(&[
        "lab",
        "--suite",
        "congruence-invariance",
        "--trials",
        "100",
        "--seed",
        "3",
        "--inject-non-unimodular",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(json(&out)["report"]["rejected_moves"].as_u64().unwrap() > 0);

    // Plain mirror antisymmetry is not exact for m = 3, k ≥ 2; this seed hits
    // such points and the failure must surface as exit code 3.
    let out = run(&["lab", "--suite", "mirror", "--trials", "1000", "--seed", "2"]);
    assert_eq!(out.status.code(), Some(3));
    let report = &json(&out)["report"];
    assert_eq!(report["passed"], false);
    let failure = &report["failures"][0]["payload"];
    assert!(failure["link"].is_object() && failure["rep"].is_object());
    replays(&out);
}

#[test]
fn loci_report() {
    let out = run(&["loci", &data("trefoil.json"), "--scans", "6", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["loci"]["disagreements"], 0);
    replays(&out);
}
