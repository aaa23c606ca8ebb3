use std::process::{Command, Output};

fn genbinom(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_genbinom"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = genbinom(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

/// Data rows after the comment lines and header, split on commas.
fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn header(csv: &str) -> &str {
    csv.lines().find(|l| !l.starts_with('#')).unwrap()
}

fn sign(text: &str) -> i32 {
    if text == "0" {
        0
    } else if text.starts_with('-') {
        -1
    } else {
        1
    }
}

#[test]
fn csv_starts_with_config_and_header() {
    let csv = stdout(&["--family", "qbracket", "--q", "4/5", "curves", "--n", "1..5", "--eta-grid", "0:1:21"]);
    assert!(csv.starts_with("# config {"));
    assert!(csv.contains("\"q\":\"4/5\""));
    assert_eq!(header(&csv), "n,eta,p_n");
}

#[test]
fn sigma_plus_curves_are_nonnegative() {
    let csv = stdout(&["--family", "qbracket", "--q", "4/5", "curves", "--n", "1..5", "--eta-grid", "0:1:21"]);
    let rows = rows(&csv);
    assert_eq!(rows.len(), 5 * 21);
    assert!(rows.iter().all(|r| sign(&r[2]) >= 0));
}

#[test]
fn show_negative_exposes_negative_parts() {
    let args = ["--family", "qbracket", "--q", "5/4", "curves", "--n", "3,5", "--eta-grid", "0:1:101"];
    let clipped = rows(&stdout(&args));
    assert!(clipped.iter().all(|r| sign(&r[2]) >= 0));
    assert!(clipped.iter().any(|r| r[0] == "3" && r[1] == "16/25" && r[2] == "0"));

    let mut full_args = args.to_vec();
    full_args.push("--show-negative");
    let full = rows(&stdout(&full_args));
    assert_eq!(full.len(), 2 * 101);
    for (n, root) in [("3", (16.0, 25.0)), ("5", (256.0, 625.0))] {
        let root = root.0 / root.1;
        let beyond: Vec<_> = full.iter().filter(|r| r[0] == n && eta(&r[1]) > root + 0.02).collect();
        assert!(beyond.iter().any(|r| sign(&r[2]) < 0), "p_{n} never negative past its root");
    }
}

fn eta(text: &str) -> f64 {
    match text.split_once('/') {
        Some((a, b)) => a.parse::<f64>().unwrap() / b.parse::<f64>().unwrap(),
        None => text.parse().unwrap(),
    }
}

#[test]
fn root_driven_curves() {
    let csv = stdout(&["--family", "root-driven", "--roots", "1,2,3,4", "curves", "--n", "2..4", "--show-negative"]);
    let rows = rows(&csv);
    assert_eq!(rows.len(), 3 * 201);
    // p_n(1) = 0 for every n >= 1
    assert!(rows.iter().filter(|r| r[1] == "1").all(|r| r[2] == "0"));
}

#[test]
fn compare_loss_semantics() {
    let below = rows(&stdout(&["--family", "qbracket", "--q", "4/5", "compare-loss"]));
    assert_eq!(below.len(), 99);
    assert!(below.iter().all(|r| eta(&r[1]) > eta(&r[2])));

    let natural = rows(&stdout(&["compare-loss", "--n", "4"]));
    assert!(natural.iter().all(|r| r[1] == r[2]));
}

#[test]
fn limit_trace_approaches_inverse_e() {
    let csv = stdout(&["--decimal", "limit", "--t", "1", "--k", "0", "--n", "10,100,1000"]);
    assert_eq!(header(&csv), "n,value,target,deviation");
    let rows = rows(&csv);
    let dev: Vec<f64> = rows.iter().map(|r| r[3].parse().unwrap()).collect();
    assert!(dev[0] > dev[1] && dev[1] > dev[2]);
    let last: f64 = rows[2][1].parse().unwrap();
    assert!((last - (-1f64).exp()).abs() < 3e-4);
}

#[test]
fn classify_sigma_minus_table() {
    let csv = stdout(&["--family", "qbracket", "--q", "5/4", "--n-max", "10", "classify"]);
    assert!(csv.contains("class sigma-"));
    let rows = rows(&csv);
    assert_eq!(rows[3][4], "64/125");
    assert_eq!(rows[9][4], "262144/1953125");
}

#[test]
fn reconstruct_from_file_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a.json");
    std::fs::write(&path, r#"["5/4", "25/16", "125/64", "625/256", "3125/1024"]"#).unwrap();
    let out = stdout(&["--format", "json", "--roots-file", path.to_str().unwrap(), "reconstruct", "--check-det"]);
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    let result = &doc["result"];
    assert_eq!(result["state"]["x"][3], "61/16");
    let steps = result["steps"].as_array().unwrap();
    assert_eq!(steps.len(), 5);
    for step in steps {
        assert_eq!(step["system_agrees"], true);
        assert_eq!(step["det"]["det_matches"], true);
    }
}

#[test]
fn sample_is_reproducible_and_written_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("h.csv");
    let run = || {
        stdout(&[
            "--family", "qbracket", "--q", "4/5", "--out", path.to_str().unwrap(),
            "sample", "--n", "4", "--eta", "1/2", "--draws", "5000", "--seed", "11",
        ]);
        std::fs::read(&path).unwrap()
    };
    let a = run();
    assert_eq!(a, run());
    let text = String::from_utf8(a).unwrap();
    let total: u64 = rows(&text).iter().map(|r| r[1].parse::<u64>().unwrap()).sum();
    assert_eq!(total, 5000);
}

#[test]
fn identity_check_vanishes() {
    let csv = stdout(&["--family", "qbracket", "--q", "4/5", "identity-check", "--eta", "1/2", "--order", "12"]);
    assert!(rows(&csv).iter().all(|r| r[1] == "0"));
}

#[test]
fn approx_mode_runs() {
    let csv = stdout(&["--family", "power-log", "--alpha", "1", "--beta", "1/2", "curves", "--n", "2,3", "--eta-grid", "0:1:5"]);
    assert_eq!(header(&csv), "n,eta,p_n");
    assert!(!rows(&csv).is_empty());
}

#[test]
fn errors_exit_nonzero() {
    // negative row refused by the sampler
    let out = genbinom(&["--family", "qbracket", "--q", "5/4", "sample", "--n", "3", "--eta", "7/10"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("16/25"));
    // missing --q
    assert!(!genbinom(&["--family", "qbracket", "classify"]).status.success());
    // unknown flag
    assert!(!genbinom(&["curves", "--n", "2", "--bogus"]).status.success());
    // conflicting curve flags
    assert!(!genbinom(&["curves", "--n", "2", "--clip-at-root", "--show-negative"]).status.success());
    // malformed grid
    assert!(!genbinom(&["curves", "--n", "2", "--eta-grid", "0:1"]).status.success());
}
