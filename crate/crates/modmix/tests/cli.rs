use std::process::{Command, Output};

use serde_json::Value;

fn modmix(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_modmix"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

#[test]
fn average_example() {
    let out = modmix(&["average", "--n", "15", "--set-a", "{0,7}", "--poly", "n^2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["result"]["average"], "2/225");
    assert_eq!(v["result"]["product"], "4/225");
}

#[test]
fn coverage_reports_missing_residue() {
    let out = modmix(&["coverage", "--n", "9", "--set-a", "squares", "--poly", "n^2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["result"]["covered"], false);
    let missing: Vec<u64> = v["result"]["missing"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_u64().unwrap())
        .collect();
    assert!(missing.contains(&3));
}

#[test]
fn usage_errors_exit_one() {
    let out = modmix(&["average", "--n", "15"]);
    assert_eq!(out.status.code(), Some(1));
    let out = modmix(&["average", "--n", "1", "--set-a", "{0}"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
    let out = modmix(&["average", "--n", "15", "--set-a", "{0}", "--poly", "n^^2"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn help_exits_zero() {
    assert_eq!(modmix(&["--help"]).status.code(), Some(0));
}

#[test]
fn failed_check_exits_two() {
    let out = modmix(&["reproduce", "--criterion", "10"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["result"]["criteria"][0]["values_ok"], false);
}

#[test]
fn output_is_deterministic() {
    let args = [
        "--seed", "5", "deviation-scan", "--n", "40", "--poly", "n^3", "--mode", "sampled",
        "--samples", "3000",
    ];
    let one = modmix(&args);
    assert_eq!(one.status.code(), Some(0), "{}", String::from_utf8_lossy(&one.stderr));
    let mut threaded = vec!["--workers", "3"];
    threaded.extend_from_slice(&args);
    let two = modmix(&threaded);
    let (a, b) = (json(&one), json(&two));
    assert_eq!(a["result"], b["result"]);
    assert_eq!(one.stdout, modmix(&args).stdout);
}

#[test]
fn verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = modmix(&["pkgoal", "--prime", "3", "--power", "2", "--set-a", "{0,1,5}"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    std::fs::write(&path, &out.stdout).unwrap();
    let ok = modmix(&["verify", path.to_str().unwrap()]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(json(&ok)["result"]["mismatches"].as_array().unwrap().len(), 0);

    let tampered = String::from_utf8(out.stdout)
        .unwrap()
        .replacen("\"lhs\": \"", "\"lhs\": \"1", 1);
    std::fs::write(&path, tampered).unwrap();
    let bad = modmix(&["verify", path.to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn csv_and_text_formats() {
    let args = ["average", "--n", "15", "--set-a", "{0,7}"];
    let csv = modmix(&[&["--output", "csv"][..], &args[..]].concat());
    let csv = String::from_utf8(csv.stdout).unwrap();
    assert!(csv.starts_with("section,key,value\n"));
    assert!(csv.contains("result,average,2/225"));
    let text = modmix(&[&["--output", "text"][..], &args[..]].concat());
    let text = String::from_utf8(text.stdout).unwrap();
    assert!(text.contains("average = 2/225"));
}
