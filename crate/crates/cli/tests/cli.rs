use std::process::{Command, Output};

fn hypres(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hypres")).args(args).output().expect("binary runs")
}

fn hypres_env(args: &[&str], key: &str, val: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hypres")).args(args).env(key, val).output().expect("binary runs")
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("valid JSON")
}

#[test]
fn verify_lie_all_pass() {
    let o = hypres(&["verify-lie", "--n", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let j = json(&o);
    assert_eq!(j["schema"], "hypres-report/1");
    assert_eq!(j["command"], "hypres verify-lie --n 3");
    assert!(j["checks"].as_array().unwrap().iter().all(|c| c["status"] == "pass"));
}

#[test]
fn band_table_has_four_entries() {
    let o = hypres(&["band-table", "--lambda0", "-11/5", "--n", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let j = json(&o);
    let e = j["data"]["entries"].as_array().unwrap();
    let got: Vec<(u64, u64, u64, &str)> = e
        .iter()
        .map(|x| (x["m"].as_u64().unwrap(), x["k"].as_u64().unwrap(), x["tensor_order"].as_u64().unwrap(), x["s0"].as_str().unwrap()))
        .collect();
    assert_eq!(got, vec![(0, 0, 0, "-1/5"), (1, 0, 1, "4/5"), (2, 0, 2, "9/5"), (2, 1, 0, "9/5")]);
}

#[test]
fn complex_lambda_round_trips() {
    let o = hypres(&["band-table", "--lambda0", "-3,1/2", "--n", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["data"]["lambda0"], "-3,1/2");
}

#[test]
fn band_scan_csv() {
    let o = hypres(&["band-scan", "--lambda0", "-2", "--n", "5", "--m-max", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let s = String::from_utf8(o.stdout).unwrap();
    let mut lines = s.lines();
    assert_eq!(lines.next(), Some("m,r,k,p_value,zero_flag"));
    // in band (m <= 2) the only zero is the stated exception m = 2, r = 0, k = 1
    let in_band: Vec<&str> = s.lines().skip(1).filter(|l| l.as_bytes()[0] <= b'2').collect();
    assert_eq!(in_band.len(), 4);
    assert_eq!(in_band.iter().filter(|l| l.ends_with(",true")).collect::<Vec<_>>(), vec![&"2,0,1,0,true"]);
}

#[test]
fn failing_check_exits_one() {
    let o = hypres(&["verify-horosphere", "--n", "2", "--m", "2", "--k", "0"]);
    assert_eq!(o.status.code(), Some(1));
    let j = json(&o);
    assert_eq!(j["data"]["lambda_polynomial_residual"]["exact-zero"], false);
    assert_eq!(j["data"]["proportionality"], "1/2");
}

#[test]
fn passing_horosphere() {
    let o = hypres(&["verify-horosphere", "--n", "3", "--m", "1", "--k", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["data"]["status"], "pass");
}

#[test]
fn quantum_verify() {
    let o = hypres(&["quantum", "verify", "--s0", "-3/4", "--j", "3", "--m", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let j = json(&o);
    assert_eq!(j["data"]["s0"], "-3/4");
    for c in j["checks"].as_array().unwrap() {
        if c.get("exact-zero").is_some() {
            assert!(c["exact-zero"].is_boolean());
        }
    }
    // s0 = n/2 has no chain
    assert_eq!(hypres(&["quantum", "verify", "--s0", "1", "--j", "2", "--m", "0"]).status.code(), Some(2));
}

#[test]
fn poisson_residual_csv_header() {
    let o = hypres(&["poisson", "residual", "--n", "2", "--m", "0", "--lambda", "1", "--grid-order", "32", "--fd-step", "1e-2", "--seed", "3", "--points", "4"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let s = String::from_utf8(o.stdout).unwrap();
    assert!(s.starts_with("point_id,rho,y1,y2,residual\n"));
    assert_eq!(s.lines().count(), 5);
}

#[test]
fn poisson_pushforward_json() {
    let o = hypres(&["poisson", "pushforward", "--n", "2", "--lambda", "0.5", "--grid-order", "40", "--seed", "1", "--points", "3", "--boosts", "3", "--field", "Y21"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    assert_eq!(json(&o)["checks"].as_array().unwrap().len(), 3);
}

#[test]
fn geo_check_csv() {
    let o = hypres(&["geo", "check", "--n", "3", "--samples", "5", "--seed", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let s = String::from_utf8(o.stdout).unwrap();
    assert!(s.starts_with("sample_id,identity,residual\n"));
    let again = hypres(&["geo", "check", "--n", "3", "--samples", "5", "--seed", "2"]);
    assert_eq!(s.as_bytes(), &again.stdout[..]);
}

#[test]
fn malformed_output_path_is_io_error() {
    let o = hypres(&["verify-lie", "--n", "2", "--output", "/nonexistent-dir/sub/report.json"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("cannot write"));
}

#[test]
fn output_file_written() {
    let dir = std::env::temp_dir().join(format!("hypres-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join("r.json");
    let o = hypres(&["verify-lie", "--n", "2", "--output", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let body = std::fs::read_to_string(&p).unwrap();
    assert!(body.contains("\"schema\": \"hypres-report/1\""));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn usage_errors() {
    assert_eq!(hypres(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(hypres(&["geo", "check", "--n", "2", "--samples", "3"]).status.code(), Some(2));
    assert_eq!(hypres(&["band-table", "--lambda0", "abc", "--n", "2"]).status.code(), Some(2));
    assert_eq!(hypres(&["band-table", "--lambda0", "-2", "--n", "2"]).status.code(), Some(2));
}

#[test]
fn budget_override() {
    assert_eq!(hypres_env(&["verify-lie", "--n", "2"], "HYPRES_BUDGET", "abc").status.code(), Some(2));
    // a tiny budget aborts the symbolic inversion with a resource error
    let o = hypres_env(&["verify-horosphere", "--n", "2", "--m", "1", "--k", "0"], "HYPRES_BUDGET", "3");
    assert_eq!(o.status.code(), Some(2), "{}", String::from_utf8_lossy(&o.stdout));
    assert!(String::from_utf8_lossy(&o.stderr).contains("resource"));
}
