use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use shadowlab::cli::io::{matrix_from_json, matrix_to_json};
use shadowlab::cli::registry;

fn shadowlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shadowlab")).args(args).env_remove("SHADOWLAB_THREADS").output().unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json_stdout(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

#[test]
fn usage_and_data_errors() {
    assert_eq!(shadowlab(&[]).status.code(), Some(1));
    assert_eq!(shadowlab(&["shadow", "--builtin", "A2_0", "--bins", "7"]).status.code(), Some(1));
    assert_eq!(shadowlab(&["shadow", "--builtin", "A2_0", "--matrix", "x.json"]).status.code(), Some(1));
    assert_eq!(shadowlab(&["--version"]).status.code(), Some(0));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"n\": 2,\n \"rows\": [[[1, 0], [0, 0]],\n [[0, 0]]]}").unwrap();
    let o = shadowlab(&["normalize", "--matrix", path(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    std::fs::write(&bad, "{\"n\": 2,\n \"rows\": [[[1, 0], [0, 0]],\n [[0, 0], [0, \"x\"]]]}").unwrap();
    let o = shadowlab(&["normalize", "--matrix", path(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));

    // Scalar matrix has no normalization.
    let scalar = dir.path().join("scalar.json");
    std::fs::write(&scalar, matrix_to_json(&shadowlab::Matrix::identity(3))).unwrap();
    assert_eq!(shadowlab(&["normalize", "--matrix", path(&scalar)]).status.code(), Some(2));
}

#[test]
fn matrix_file_round_trip_matches_builtin() {
    let dir = tempfile::tempdir().unwrap();
    let a = registry::builtin("A3_1").unwrap();
    let file = dir.path().join("a31.json");
    std::fs::write(&file, matrix_to_json(&a)).unwrap();
    assert_eq!(matrix_from_json(&std::fs::read_to_string(&file).unwrap()).unwrap(), a);

    let from_file = shadowlab(&["spaces", "--matrix", path(&file)]);
    let from_name = shadowlab(&["spaces", "--builtin", "A3_1"]);
    let (f, b) = (json_stdout(&from_file), json_stdout(&from_name));
    assert_eq!(f["dim_xa"], b["dim_xa"]);
    assert_eq!(f["manifest"]["matrix_sha256"], b["manifest"]["matrix_sha256"]);
}

#[test]
fn normalize_reports_constants() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("frame");
    let o = shadowlab(&["normalize", "--builtin", "A4_8", "--frame", path(&prefix)]);
    assert!(o.status.success());
    let v = json_stdout(&o);
    for key in ["d", "alpha", "c1", "c2", "gamma1", "gamma2"] {
        assert!(v[key].is_number(), "{key}");
    }
    assert!((v["alpha"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    let read = |ext: &str| {
        matrix_from_json(&std::fs::read_to_string(dir.path().join(format!("frame.{ext}"))).unwrap()).unwrap()
    };
    let (v1, v2) = (read("v1.json"), read("v2.json"));
    assert!(shadowlab::normalize::frame_to_matrix(&v1, &v2).is_ok());
    assert!((v["natural_alpha"].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn shadow_writes_all_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("a30");
    let o = shadowlab(&[
        "shadow",
        "--builtin",
        "A3_0",
        "--samples",
        "20000",
        "--bins",
        "32x24",
        "--seed",
        "3",
        "--threads",
        "2",
        "--out",
        path(&prefix),
        "--section",
        "0,0,1,0,0.05",
        "--section-bins",
        "20",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));

    let csv = std::fs::read_to_string(prefix.with_extension("csv")).unwrap();
    assert!(csv.starts_with("re_center,im_center,density\n"));
    assert_eq!(csv.lines().count(), 1 + 32 * 24);

    let pgm = std::fs::read(prefix.with_extension("pgm")).unwrap();
    let header = b"P5\n32 24\n65535\n";
    assert!(pgm.starts_with(header));
    assert_eq!(pgm.len(), header.len() + 2 * 32 * 24);

    let meta: Value = serde_json::from_slice(&std::fs::read(prefix.with_extension("json")).unwrap()).unwrap();
    assert_eq!(meta["samples"], 20000);
    assert_eq!(meta["threads"], 2);
    assert_eq!(meta["support_check"], true);
    assert_eq!(meta["manifest"]["seed"], 3);

    let section = std::fs::read_to_string(dir.path().join("a30.section.csv")).unwrap();
    assert!(section.starts_with("s_center,density\n"));
    assert_eq!(section.lines().count(), 21);
}

#[test]
fn threads_fall_back_to_environment() {
    let dir = tempfile::tempdir().unwrap();
    let run = |tag: &str, env: Option<&str>, args: &[&str]| {
        let prefix = dir.path().join(tag);
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_shadowlab"));
        cmd.args(["shadow", "--builtin", "A2_0", "--samples", "5000", "--bins", "8x8", "--format", "csv", "--out"])
            .arg(&prefix)
            .args(args)
            .env_remove("SHADOWLAB_THREADS");
        if let Some(t) = env {
            cmd.env("SHADOWLAB_THREADS", t);
        }
        assert!(cmd.status().unwrap().success());
        let meta: Value = serde_json::from_slice(&std::fs::read(prefix.with_extension("json")).unwrap()).unwrap();
        (std::fs::read(prefix.with_extension("csv")).unwrap(), meta["threads"].as_u64().unwrap())
    };
    let (env_csv, env_threads) = run("env", Some("3"), &[]);
    let (flag_csv, flag_threads) = run("flag", Some("1"), &["--threads", "3"]);
    assert_eq!((env_threads, flag_threads), (3, 3));
    assert_eq!(env_csv, flag_csv);
    assert!(!dir.path().join("env.pgm").exists());
}

#[test]
fn mixed_shadow_and_dynamics() {
    let o = shadowlab(&["mixed-shadow", "--builtin", "A2_0", "--ancilla", "2", "--samples", "5000", "--bins", "16x16"]);
    assert!(o.status.success());
    assert_eq!(json_stdout(&o)["ancilla"], 2);

    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("traj");
    let o = shadowlab(&[
        "dynamics",
        "--builtin",
        "D_A3",
        "--state",
        "0,0,1,0,0,0",
        "--steps",
        "50",
        "--out",
        path(&prefix),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(prefix.with_extension("csv")).unwrap();
    assert_eq!(csv.lines().count(), 51);
    let meta: Value = serde_json::from_slice(&std::fs::read(prefix.with_extension("json")).unwrap()).unwrap();
    assert!(meta["period"].is_number() || meta["period"].is_string());
}

#[test]
fn range_summary() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("tri");
    let o = shadowlab(&["range", "--builtin", "A3_3", "--out", path(&prefix)]);
    assert!(o.status.success());
    let v = json_stdout(&o);
    assert_eq!(v["flat_parts"], 3);
    assert!((v["radius_bound"].as_f64().unwrap() - (2.0f64 / 3.0).sqrt()).abs() < 1e-15);
    assert!(v["max_radius"].as_f64().unwrap() <= v["radius_bound"].as_f64().unwrap() + 1e-12);
}

#[test]
fn rand_law_reports_ks() {
    let o = shadowlab(&["rand-law", "--which", "density", "--n", "3", "--k", "2", "--samples", "20000", "--seed", "5"]);
    assert!(o.status.success());
    let v = json_stdout(&o);
    assert_eq!(v["pass"], true);
    assert_eq!(v["law"]["kind"], "beta");

    let o = shadowlab(&["rand-law", "--which", "unitary", "--n", "4", "--samples", "20000"]);
    assert!(o.status.success());
    assert!(json_stdout(&o)["phase_ks_statistic"].is_number());
}

#[test]
fn selftest_passes() {
    let o = shadowlab(&["selftest"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stdout));
    let o = shadowlab(&["selftest", "--list"]);
    assert_eq!(String::from_utf8(o.stdout).unwrap().lines().count(), registry::names().len());
}
