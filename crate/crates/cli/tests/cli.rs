//! End-to-end runs of the binary: stable headers, exit-code contract and
//! lossless JSON round trips.

use std::path::PathBuf;
use std::process::{Command, Output};

fn doublewell(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_doublewell"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn tmp(name: &str) -> PathBuf {
    let mut path = std::env::temp_dir();
    path.push(format!("doublewell-test-{}-{name}", std::process::id()));
    path
}

#[test]
fn find_header_and_convergence() {
    let output = doublewell(&[
        "rpm", "find", "--seed", "1.0", "--digits", "60", "--Dmax", "16", "--tol", "1e-10",
    ]);
    let text = stdout(&output);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,D_final,Re_E,abs_Im_E,err_est,status"));
    let row = lines.next().expect("one data row");
    assert!(row.starts_with("0,"), "{row}");
    assert!(row.contains("1.0040807"), "{row}");
    assert!(row.ends_with("converged"), "{row}");
    assert!(output.status.success());
}

#[test]
fn negative_seed_reaches_the_companion_level() {
    let output = doublewell(&[
        "rpm", "find", "--seed", "-1.1", "--Dmax", "10", "--digits", "60", "--tol", "1e-10",
    ]);
    assert!(output.status.success());
    assert!(stdout(&output).contains("-1.1445079714378"), "{}", stdout(&output));
}

#[test]
fn degenerate_parameters_exit_one() {
    let output = doublewell(&["rpm", "find", "--J", "0", "--lambda", "0", "--seed", "0.9"]);
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn unknown_flag_exits_one() {
    let output = doublewell(&["rpm", "find", "--frobnicate"]);
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn bad_number_exits_one() {
    let output = doublewell(&["rpm", "find", "--seed", "not-a-number"]);
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn stagnated_sequence_exits_two() {
    // D_max 4 cannot settle a resonance to any trend
    let output = doublewell(&[
        "rpm", "find", "--parity", "odd", "--seed", "2.84,-0.0001", "--Dmax", "9", "--digits",
        "60", "--tol", "1e-30",
    ]);
    assert_eq!(output.status.code(), Some(2));
    // the record is still written
    assert!(stdout(&output).lines().count() >= 2);
}

#[test]
fn json_round_trip_is_lossless() {
    let path = tmp("roundtrip.json");
    let output = doublewell(&[
        "rpm", "find", "--seed", "1.0", "--digits", "60", "--Dmax", "16", "--tol", "1e-10",
        "--format", "json", "--out", path.to_str().unwrap(),
    ]);
    assert!(output.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(parsed["schema"], "resonance-record/1");
    let record = &parsed["records"][0];
    assert_eq!(record["method"], "rpm");
    assert!(record["Re_E"].as_str().unwrap().starts_with("1.0040807"));
    assert!(record["history"].as_array().unwrap().len() >= 3);

    // identical file against itself: every pair at distance zero
    let compare = doublewell(&[
        "compare",
        path.to_str().unwrap(),
        path.to_str().unwrap(),
        "--radius",
        "1e-6",
    ]);
    assert!(compare.status.success());
    let report = stdout(&compare);
    let mut lines = report.lines();
    assert_eq!(
        lines.next(),
        Some("left,right,left_Re,left_Im,right_Re,right_Im,log10_dist,status")
    );
    let row = lines.next().unwrap();
    assert!(row.contains("-inf"), "{row}");
    // the decimal strings pass through verbatim
    let full_re = serde_json::from_str::<serde_json::Value>(&text).unwrap()["records"][0]["Re_E"]
        .as_str()
        .unwrap()
        .to_string();
    assert!(row.contains(&full_re));
    let _ = std::fs::remove_file(&path);
}

#[test]
fn disjoint_spectra_match_nothing() {
    let a = tmp("disjoint-a.json");
    let b = tmp("disjoint-b.json");
    std::fs::write(
        &a,
        r#"{"schema":"resonance-record/1","records":[
            {"label":"bound","method":"rpm","Re_E":"1.0","Im_E":"0","uncertainty":"1e-10"}]}"#,
    )
    .unwrap();
    std::fs::write(
        &b,
        r#"{"schema":"resonance-record/1","records":[
            {"label":"type_b","method":"rr","Re_E":"5.0","Im_E":"-2.0","uncertainty":"1e-6"}]}"#,
    )
    .unwrap();
    let output = doublewell(&[
        "compare", a.to_str().unwrap(), b.to_str().unwrap(), "--radius", "0.5",
    ]);
    assert!(output.status.success());
    let report = stdout(&output);
    assert!(report.contains("unmatched_left"));
    assert!(report.contains("unmatched_right"));
    assert_eq!(report.lines().count(), 3);
    let _ = std::fs::remove_file(&a);
    let _ = std::fs::remove_file(&b);
}

#[test]
fn wrong_schema_rejected() {
    let path = tmp("schema.json");
    std::fs::write(&path, r#"{"schema":"something/9","records":[]}"#).unwrap();
    let output = doublewell(&[
        "compare", path.to_str().unwrap(), path.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(1));
    let _ = std::fs::remove_file(&path);
}

#[test]
fn single_angle_scan_has_empty_stability() {
    let output = doublewell(&[
        "rr", "scan", "--theta-min", "0.3", "--theta-max", "0.3", "--N", "8",
    ]);
    assert!(output.status.success());
    let text = stdout(&output);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("theta,path_id,Re_E,Im_E,stability"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 8);
    assert!(rows.iter().all(|r| r.ends_with(',')), "{rows:?}");
}

#[test]
fn scan_json_records_have_labels() {
    let output = doublewell(&[
        "rr", "scan", "--theta-min", "0.20", "--theta-max", "0.40", "--theta-step", "0.01",
        "--N", "24", "--format", "json",
    ]);
    assert!(output.status.success());
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(parsed["schema"], "resonance-record/1");
    for record in parsed["records"].as_array().unwrap() {
        assert!(matches!(
            record["label"].as_str().unwrap(),
            "bound" | "type_a" | "type_b"
        ));
        assert_eq!(record["method"], "rr");
    }
}

#[test]
fn fig_series_header_and_missing_rows() {
    let output = doublewell(&[
        "fig", "im-vs-j", "--J-min", "0.8", "--J-max", "0.8", "--N", "8", "--index", "30",
    ]);
    assert!(output.status.success());
    let text = stdout(&output);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("J,Re_E,Im_E,status"));
    // an 8-state basis cannot host the 31st plateau: flagged, not fatal
    assert_eq!(lines.next(), Some("0.8,,,missing"));
}

#[test]
fn hf_bound_slopes_within_bounds() {
    let output = doublewell(&[
        "hf", "check", "--digits", "60", "--tol", "1e-10", "--Dmax", "20",
    ]);
    assert!(output.status.success(), "{}", String::from_utf8_lossy(&output.stderr));
    let text = stdout(&output);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("kind,parity,Re_E,Im_E,dRe_dJ,dAbsIm_dJ,status"));
    let row = lines.next().expect("one bound state at J = 0.8");
    assert!(row.starts_with("bound,even,1.0040807"), "{row}");
    assert!(row.ends_with("ok"), "{row}");
}
