use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coorbital"))
        .args(args)
        .env("SOURCE_DATE_EPOCH", "0")
        .output()
        .expect("run coorbital")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid json")
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().unwrap_or(-1)
}

#[test]
fn equilateral_kernel_is_the_equal_mass_ray() {
    let doc = json(&["masses", "--thetas", "0,2pi/3,4pi/3"]);
    let r = &doc["result"];
    assert_eq!(r["kernel_dimension"], 1);
    let v: Vec<f64> = r["kernel"][0].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    assert!(v.iter().all(|x| (x.abs() - v[0].abs()).abs() < 1e-12), "{v:?}");
    assert_eq!(r["positive_region"]["kind"], "ray");
}

#[test]
fn asymmetric_1p4_angles_have_two_dimensional_kernel() {
    let doc = json(&["fmatrix", "--thetas", "-pi/6,-1.93625755799,1.93625755799,pi/6", "--tol", "1e-8"]);
    assert_eq!(doc["result"]["kernel"].as_array().unwrap().len(), 2);
    assert_eq!(doc["manifest"]["command"], "fmatrix");
    assert_eq!(doc["manifest"]["timestamp"], "1970-01-01T00:00:00Z");
}

#[test]
fn hexagon_with_equal_masses() {
    let doc = json(&["stability", "--thetas", "0,pi/3,2pi/3,pi,4pi/3,5pi/3", "--masses", "1,1,1,1,1,1"]);
    let r = &doc["result"];
    assert_eq!(r["morse_index"], 2);
    assert_eq!(r["inertia_consistent"], true);
    assert_eq!(r["residual_warning"], false);
    assert_eq!(r["inertia_h"]["zero"], 1);
}

#[test]
fn pfaffian_of_family_matches_explicit_angles() {
    let fam = json(&["pfaffian", "--family", "type2-1p4", "--free", "1.2,0.4"]);
    let explicit = json(&["pfaffian", "--thetas", "1.2,0.4,-0.4,-1.2"]);
    let (a, b) = (fam["result"]["pfaffian"].as_f64().unwrap(), explicit["result"]["pfaffian"].as_f64().unwrap());
    assert!((a - b).abs() < 1e-14, "{a} {b}");
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        let out = run(&["trace", "--tag", "z3", "--family", "sym-1p5", "--grid", "64", "--out", p.to_str().unwrap()]);
        assert!(out.status.success());
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let manifest: Value = serde_json::from_slice(&fs::read(dir.path().join("a.csv.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["command"], "trace");
    assert_eq!(manifest["parameters"]["grid"], 64);

    let first = run(&["solve-family", "--family", "sym-1p5", "--masses", "1,1,1,1,1", "--random-seeds", "20"]);
    let second = run(&["solve-family", "--family", "sym-1p5", "--masses", "1,1,1,1,1", "--random-seeds", "20"]);
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn empty_trace_window_gives_header_only() {
    let out = run(&["trace", "--tag", "pfaffian", "--family", "type2-1p4", "--window", "2.0,2.05,0.30,0.35"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "tag,curve_id,theta1,theta2\n");
}

#[test]
fn region_check_reports_membership() {
    let b = json(&["region-check", "b", "--thetas", "0.4,0,-0.4,-0.8"]);
    assert_eq!(b["result"]["inside"], true);
    let c = json(&["region-check", "c", "--theta1", "pi/2.5", "--theta2", "pi/4"]);
    assert_eq!(c["result"]["inside"], true);
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["certify", "thm1"]), 0);
    assert_eq!(code(&["certify", "bogus"]), 2);
    assert_eq!(code(&["certify", "thm1", "--s", "2"]), 2);
    assert_eq!(code(&["fmatrix", "--thetas", "0,abc"]), 2);
    assert_eq!(code(&["stability", "--thetas", "0,1,2", "--masses", "1,0,1"]), 2);
    assert_eq!(code(&["fmatrix", "--thetas", "0,0,1"]), 3);
    assert_eq!(code(&["masses", "--thetas", "0,1", "--format", "csv"]), 2);
    assert_eq!(code(&["solve-family", "--family", "type2-1p4", "--masses", "1,2"]), 2);
    assert_eq!(code(&["certify", "thm5", "--max-boxes", "10"]), 1);
}
