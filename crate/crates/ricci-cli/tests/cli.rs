//! End-to-end tests of the compiled binary: flag handling, exit codes,
//! output determinism and the JSON round trip.

use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ricci-wb"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn classify_berger_is_certified() {
    let out = run(&[
        "classify", "--space", "berger", "--coords", "1,0.7", "--format", "json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["kernel_dim"], 1);
    assert_eq!(v["certificate"], "certified");
    let scal = v["scal"].as_f64().unwrap();
    assert!((scal - (4.0 * 0.7 - 1.0) / (4.0 * 0.49)).abs() < 1e-12);
}

#[test]
fn classify_s5s1_is_excluded() {
    let out = run(&[
        "classify",
        "--space",
        "s5s1",
        "--coords",
        "1,1,1,0.3",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(v["kernel_dim"].as_u64().unwrap() >= 2);
    assert_eq!(v["certificate"], "excluded");
}

#[test]
fn solve_round_trip_through_flags() {
    // T = ric(g_0.7); both output coordinates must recover the 0.7 family
    let out = run(&[
        "solve",
        "--space",
        "berger",
        "--T",
        "0.5102040816326531,0.14285714285714288",
        "--start",
        "1,0.65",
        "--normalize",
        "0.49",
        "--format",
        "json",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let c = v["c"].as_f64().unwrap();
    assert!((c - 1.0).abs() < 1e-8);
    let coords = v["solution_coords"].as_array().unwrap();
    assert!((coords[0].as_f64().unwrap() - 1.0).abs() < 1e-8);
    assert!((coords[1].as_f64().unwrap() - 0.7).abs() < 1e-8);
}

#[test]
fn exit_codes() {
    // 1: bad usage (no space source)
    let out = run(&["classify", "--coords", "1,0.7"]);
    assert_eq!(out.status.code(), Some(1));
    let err: serde_json::Value =
        serde_json::from_str(String::from_utf8_lossy(&out.stderr).trim()).unwrap();
    assert_eq!(err["error"]["kind"], "usage");

    // 1: both sources
    let out = run(&["show", "--space", "berger", "--spec-json", "x.json"]);
    assert_eq!(out.status.code(), Some(1));

    // 1: wrong coordinate count
    let out = run(&["classify", "--space", "berger", "--coords", "1,2,3"]);
    assert_eq!(out.status.code(), Some(1));

    // 2: validation failure (spec breaking the Jacobi identity)
    let dir = std::env::temp_dir().join("ricci-wb-test");
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(
        &bad,
        r#"{"name":"bad","dim_g":3,"dim_k":0,"brackets":[
            [1,2,[[3,0.7071067811865476],[1,0.3]]],
            [1,3,[[2,-0.7071067811865476]]],
            [2,3,[[1,0.7071067811865476]]]]}"#,
    )
    .unwrap();
    let out = run(&["show", "--spec-json", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err: serde_json::Value =
        serde_json::from_str(String::from_utf8_lossy(&out.stderr).trim()).unwrap();
    assert_eq!(err["error"]["kind"], "validation");

    // 3: solver failure (iteration cap too small)
    let out = run(&[
        "solve",
        "--space",
        "berger",
        "--T",
        "0.5102040816326531,0.14285714285714288",
        "--start",
        "1,0.4",
        "--max-iter",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let err: serde_json::Value =
        serde_json::from_str(String::from_utf8_lossy(&out.stderr).trim()).unwrap();
    assert_eq!(err["error"]["kind"], "solver");
}

#[test]
fn sweep_is_deterministic_with_fixed_columns() {
    let args = [
        "sweep",
        "--space",
        "berger",
        "--coords",
        "1,1",
        "--range",
        "1=0.1:2.0:12",
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(
        stdout(&a),
        stdout(&b),
        "sweep output must be byte-identical"
    );
    let text = stdout(&a);
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    assert_eq!(
        header,
        "param_0,param_1,scal,kernel_dim,certificate,sig_neg,sig_zero,sig_pos,sv_min,sv_min2"
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 12);
    for row in rows {
        assert_eq!(row.split(',').count(), 10);
    }
}

#[test]
fn catalog_export_round_trips() {
    let out = run(&["catalog", "export", "s5s1"]);
    assert!(out.status.success());
    let dir = std::env::temp_dir().join("ricci-wb-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("s5s1.json");
    std::fs::write(&path, stdout(&out)).unwrap();
    // the re-imported space classifies identically
    let direct = run(&[
        "classify",
        "--space",
        "s5s1",
        "--coords",
        "1,1,1,0.3",
        "--format",
        "json",
    ]);
    let direct_v: serde_json::Value = serde_json::from_str(&stdout(&direct)).unwrap();
    let show = run(&[
        "show",
        "--spec-json",
        path.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert!(
        show.status.success(),
        "{}",
        String::from_utf8_lossy(&show.stderr)
    );
    let show_v: serde_json::Value = serde_json::from_str(&stdout(&show)).unwrap();
    assert_eq!(show_v["invariant_sym_dim"], 4);
    assert_eq!(show_v["unimodular"], true);
    assert_eq!(direct_v["unimodular"], true);
    let out = run(&["catalog", "export", "nope"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn verify_single_space_passes() {
    let out = run(&["verify", "--space", "berger"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = stdout(&out);
    assert!(text.lines().all(|l| l.starts_with("PASS")));
    assert!(text.lines().count() >= 10);
}

#[test]
fn rank_tolerance_env_override() {
    // an absurdly large rank cutoff declares everything singular
    let out = bin()
        .args([
            "classify", "--space", "berger", "--coords", "1,0.7", "--format", "json",
        ])
        .env("RICCI_WB_TOL", "1e3")
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["kernel_dim"], 2);
    // and a bogus value is a usage error
    let out = bin()
        .args(["classify", "--space", "berger", "--coords", "1,0.7"])
        .env("RICCI_WB_TOL", "banana")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}
