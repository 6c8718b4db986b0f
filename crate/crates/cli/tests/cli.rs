use std::process::{Command, Output};

fn koenigs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_koenigs")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8")
}

#[test]
fn classify_trig_zero_energy_crossing() {
    let o = koenigs(&["classify", "--family", "trig", "--rho", "0.5", "--xi", "-2", "--E", "0", "--L", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["tag"], "trig_zero_crossing");
    let theta = v["params"]["theta"].as_f64().unwrap();
    assert!((theta - 1f64.asinh()).abs() < 1e-12);
}

#[test]
fn spectrum_hplus_single_level() {
    let o = koenigs(&["spectrum", "--family", "hplus", "--rho", "2", "--xi", "3.75"]);
    assert_eq!(o.status.code(), Some(0));
    let mut rdr = csv::Reader::from_reader(o.stdout.as_slice());
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 1);
    let e: f64 = rows[0][3].parse().unwrap();
    assert!((e - (6f64.sqrt() - 1.5)).abs() < 1e-6);
}

#[test]
fn verify_default_suite_passes() {
    let o = koenigs(&["verify", "--suite", "all", "--tol", "default"]);
    let text = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{text}");
    assert!(!text.contains("FAIL"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(koenigs(&["bogus"]).status.code(), Some(2));
    assert_eq!(koenigs(&["classify", "--family", "trig", "--rho", "0.5", "--xi", "1"]).status.code(), Some(2));
    assert_eq!(koenigs(&["spectrum", "--family", "trig", "--rho", "0.5", "--xi", "1"]).status.code(), Some(2));
    assert_eq!(koenigs(&["flow", "--family", "h0", "--rho", "1", "--xi", "2", "--E", "1", "--L", "1", "--tol", "x"]).status.code(), Some(2));
    let o = koenigs(&["actions", "--family", "affine", "--rho", "1", "--xi", "2", "--L", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
}

#[test]
fn help_exits_0() {
    assert_eq!(koenigs(&["--help"]).status.code(), Some(0));
}

#[test]
fn identical_runs_are_byte_identical() {
    let args = ["flow", "--family", "hplus", "--rho", "2", "--xi", "8", "--E", "1.8", "--L", "1", "--format", "json", "--t-end", "2"];
    let a = koenigs(&args);
    let b = koenigs(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn figures_writes_four_svgs() {
    let dir = std::env::temp_dir().join(format!("koenigs-figs-{}", std::process::id()));
    let o = koenigs(&["figures", "--out", dir.to_str().unwrap(), "--points", "80"]);
    assert_eq!(o.status.code(), Some(0));
    for k in 1..=4 {
        let s = std::fs::read_to_string(dir.join(format!("fig{k}.svg"))).unwrap();
        assert!(s.starts_with("<svg") && s.contains("<polyline"));
    }
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn geodesic_csv_has_branches() {
    let o = koenigs(&["geodesic", "--family", "h0", "--rho", "1", "--xi", "2", "--E", "0.9", "--L", "1", "--points", "10"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("branch,q1,q2\n"));
    assert_eq!(text.lines().count(), 21);
}
