use std::f64::consts::PI;
use std::process::{Command, Output};

fn phasequant(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_phasequant")).args(args).output().unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = phasequant(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> serde_json::Value {
    serde_json::from_str(&stdout(args)).unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<f64>> {
    text.lines()
        .skip(1)
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect()
}

fn complex(v: &serde_json::Value) -> (f64, f64) {
    (v[0].as_f64().unwrap(), v[1].as_f64().unwrap())
}

#[test]
fn quantize_examples() {
    assert_eq!(
        stdout(&["quantize", "x^2", "--scheme", "antiwick"]).trim(),
        "hbar*ad^2/2 + hbar*ad*a + hbar*a^2/2 + hbar"
    );
    assert_eq!(stdout(&["quantize", "1", "--scheme", "weyl"]).trim(), "1");
    let out = stdout(&["quantize", "x^2", "--scheme", "weyl", "--as-symbol", "antiwick"]);
    assert!(out.lines().any(|l| l.ends_with(": x^2 - hbar/2")), "{out}");
    let j = json(&["quantize", "x^2", "--as-symbol", "antiwick", "--format", "json"]);
    assert_eq!(j["symbol"], "x^2 - hbar/2");
}

#[test]
fn quantize_infers_mode_count() {
    let out = stdout(&["quantize", "x1*p2", "--scheme", "wick"]);
    assert!(out.contains("a1") && out.contains("a2"), "{out}");
}

#[test]
fn parse_errors_exit_nonzero() {
    let out = phasequant(&["quantize", "x^"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
    assert!(out.stdout.is_empty());
}

#[test]
fn expect_examples() {
    let j = json(&["expect", "x^2", "--scheme", "antiwick", "--state", "vacuum", "--format", "json"]);
    let (h, q) = (complex(&j["hilbert"]), complex(&j["qAverage"]));
    assert!((h.0 - 1.0).abs() < 1e-9 && (q.0 - 1.0).abs() < 1e-9);
    assert!(j["deviation"].as_f64().unwrap() <= 1e-9);

    let j = json(&["expect", "1", "--state", "coherent:1,0", "--format", "json"]);
    assert!((complex(&j["hilbert"]).0 - 1.0).abs() < 1e-12);

    let j = json(&["expect", "x", "--scheme", "antiwick", "--state", "coherent:1,0", "--format", "json"]);
    for key in ["hilbert", "qAverage"] {
        let (re, im) = complex(&j[key]);
        assert!((re - 2f64.sqrt()).abs() < 1e-9 && im.abs() < 1e-12, "{key}");
    }
}

#[test]
fn expect_reports_small_cutoff() {
    let out = phasequant(&["expect", "x", "--state", "coherent:3,0", "--cutoff", "5"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("cutoff"));
}

#[test]
fn qgrid_vacuum_peak() {
    let rows = csv_rows(&stdout(&["qgrid", "--state", "vacuum", "--points", "21"]));
    assert_eq!(rows.len(), 21 * 21);
    let peak = rows.iter().map(|r| r[2]).fold(f64::MIN, f64::max);
    assert!((peak - 1.0 / (2.0 * PI)).abs() < 1e-6);
    let origin = rows.iter().find(|r| r[0] == 0.0 && r[1] == 0.0).unwrap();
    assert_eq!(origin[2], peak);
}

#[test]
fn qgrid_fock_one_signs() {
    let text = stdout(&["qgrid", "--state", "fock:1", "--points", "21"]);
    assert_eq!(text.lines().next(), Some("x,p,Q,W,smoothedW"));
    let rows = csv_rows(&text);
    assert!(rows.iter().all(|r| r[2] >= 0.0));
    let origin = rows.iter().find(|r| r[0] == 0.0 && r[1] == 0.0).unwrap();
    assert!(origin[3] < 0.0);
}

#[test]
fn qgrid_default_grid() {
    let rows = csv_rows(&stdout(&["qgrid", "--state", "vacuum", "--hbar", "2"]));
    assert_eq!(rows.len(), 41 * 41);
    let extent = 4.0 * 2f64.sqrt();
    assert!((rows[0][0] + extent).abs() < 1e-12 && (rows[0][1] + extent).abs() < 1e-12);
}

#[test]
fn marginal_dump() {
    let text = stdout(&["marginal", "--state", "vacuum", "--points", "5"]);
    assert_eq!(text.lines().next(), Some("x,qmarg,born"));
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 5);
    let mid = &rows[2];
    assert!((mid[1] - 1.0 / (2.0 * PI).sqrt()).abs() < 1e-12);
    assert!((mid[2] - 1.0 / PI.sqrt()).abs() < 1e-12);
}

#[test]
fn verify_scheme_table() {
    let out = phasequant(&["verify", "scheme-table"]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["pass"], true);
    let rows: Vec<_> = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["id"].as_str().unwrap().starts_with("x2-"))
        .collect();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|c| c["maxDeviation"] == 0.0 && c["tolerance"] == 0.0));
}

#[test]
fn verify_unknown_suite_is_usage_error() {
    let out = phasequant(&["verify", "nosuch"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
}

#[test]
fn config_file_precedence() {
    let dir = std::env::temp_dir().join(format!("phasequant-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("run.conf");
    std::fs::write(&cfg, "# settings\nhbar = 2\nformat = json\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    let j = json(&["expect", "x^2", "--state", "vacuum", "--config", cfg]);
    assert_eq!(j["hbar"], 2.0);
    let j = json(&["expect", "x^2", "--state", "vacuum", "--config", cfg, "--hbar", "0.5"]);
    assert_eq!(j["hbar"], 0.5);
    assert!((complex(&j["hilbert"]).0 - 0.5).abs() < 1e-12);

    let bad = dir.join("bad.conf");
    std::fs::write(&bad, "colour = blue\n").unwrap();
    let out = phasequant(&["quantize", "x", "--config", bad.to_str().unwrap()]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown config key"));
    let out = phasequant(&["quantize", "x", "--hbar", "-1"]);
    assert!(!out.status.success());
}

#[test]
fn out_flag_writes_file() {
    let path = std::env::temp_dir().join(format!("phasequant-out-{}.json", std::process::id()));
    let out = phasequant(&["verify", "groenewold", "--out", path.to_str().unwrap()]);
    assert!(out.status.success() && out.stdout.is_empty());
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(report["suite"], "groenewold");
    let missing = phasequant(&["qgrid", "--state", "vacuum", "--out", "/nonexistent/dir/q.csv"]);
    assert!(!missing.status.success());
    assert!(String::from_utf8_lossy(&missing.stderr).contains("/nonexistent/dir/q.csv"));
}
