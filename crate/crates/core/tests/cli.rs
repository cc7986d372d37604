use std::path::Path;
use std::process::{Command, Output};

use mmdim_core::tiling::{q, qr, Cube, CubeFamily, Family, GridFamily, Region};
use serde_json::Value;

fn mmdim(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mmdim"))
        .args(args)
        .env("MMDIM_OUT_DIR", dir)
        .output()
        .unwrap()
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn systems_listing_uses_the_output_directory_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = mmdim(dir.path(), &["systems"]);
    assert!(out.status.success());
    let doc = read_json(&dir.path().join("systems.json"));
    assert_eq!(doc["version"], env!("CARGO_PKG_VERSION"));
    let ids: Vec<&str> = doc["result"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["spec"]["id"].as_str().unwrap())
        .collect();
    assert!(ids.contains(&"golden-mean") && ids.contains(&"hilbert-cube"));
    let csv = std::fs::read_to_string(dir.path().join("systems.csv")).unwrap();
    assert!(csv.starts_with("# mmdim "));
    assert_eq!(
        csv.lines().nth(1).unwrap(),
        "id,point_kind,lattice_dim,known_mmdim,expansivity_constant,oracle"
    );
}

#[test]
fn mmdim_reports_the_full_shift_as_zero_dimensional() {
    let dir = tempfile::tempdir().unwrap();
    let out = mmdim(
        dir.path(),
        &[
            "mmdim",
            "--system",
            "full-shift-3",
            "--eps",
            "2^-1..2^-4",
            "--format",
            "json",
        ],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc = read_json(&dir.path().join("mmdim.json"));
    assert_eq!(doc["result"]["estimate"]["upper"].as_f64(), Some(0.0));
    assert_eq!(doc["config"]["eps_list"].as_array().unwrap().len(), 4);
    assert!(!dir.path().join("mmdim.csv").exists());
}

#[test]
fn config_file_supplies_parameters_and_flags_override_it() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(
        &cfg,
        r#"{"system": "golden-mean", "eps_list": [0.5, 0.25, 0.125], "window_sizes": [1, 2, 3, 4, 5, 6]}"#,
    )
    .unwrap();
    let out = mmdim(
        dir.path(),
        &["entropy", "--config", cfg.to_str().unwrap(), "--eps", "0.25"],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc = read_json(&dir.path().join("entropy.json"));
    assert_eq!(doc["config"]["system"], "golden-mean");
    assert_eq!(doc["config"]["eps_list"], serde_json::json!([0.25]));
    assert_eq!(doc["result"].as_array().unwrap().len(), 1);
}

#[test]
fn usage_errors_exit_with_status_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        mmdim(dir.path(), &["mmdim", "--system", "no-such-system"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        mmdim(dir.path(), &["mmdim", "--eps", "2^-4..2^-1"]).status.code(),
        Some(2)
    );
    assert_eq!(mmdim(dir.path(), &["tile-vitali"]).status.code(), Some(2));
    assert_eq!(mmdim(dir.path(), &["frobnicate"]).status.code(), Some(2));
}

#[test]
fn vitali_selection_from_a_family_file() {
    let dir = tempfile::tempdir().unwrap();
    let family = CubeFamily::new(vec![
        Cube::new(vec![q(0), q(0)], q(2)).unwrap(),
        Cube::new(vec![q(1), q(1)], q(1)).unwrap(),
        Cube::new(vec![qr(5, 2), q(0)], qr(1, 2)).unwrap(),
    ])
    .unwrap();
    let input = dir.path().join("family.json");
    std::fs::write(&input, serde_json::to_string(&family).unwrap()).unwrap();
    let out = mmdim(dir.path(), &["tile-vitali", "--input", input.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc = read_json(&dir.path().join("tile-vitali.json"));
    assert_eq!(doc["result"]["selected_indices"], serde_json::json!([0, 2]));
    assert_eq!(doc["result"]["covered_by_tripled"], true);
}

#[test]
fn multiscale_hypothesis_failures_name_the_clause() {
    let dir = tempfile::tempdir().unwrap();
    let omega = Region::cuboid(vec![q(0)], vec![q(10)]);
    let unit = GridFamily::covering(&omega, vec![q(0)], q(1)).unwrap();
    let instance = serde_json::json!({ "omega": omega, "families": [Family::Grid(unit)], "eta": qr(1, 2) });
    let input = dir.path().join("instance.json");
    std::fs::write(&input, instance.to_string()).unwrap();
    let out = mmdim(dir.path(), &["tile-multiscale", "--input", input.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("boundary_volume"));
}

#[test]
fn multiscale_selection_on_a_long_interval() {
    let dir = tempfile::tempdir().unwrap();
    let omega = Region::cuboid(vec![q(0)], vec![q(5000)]);
    let unit = GridFamily::covering(&omega, vec![qr(1, 2)], q(1)).unwrap();
    let big = GridFamily::covering(&omega, vec![q(0)], q(25)).unwrap();
    let instance = serde_json::json!({
        "omega": omega,
        "families": [Family::Grid(unit), Family::Grid(big)],
        "eta": qr(1, 2),
    });
    let input = dir.path().join("instance.json");
    std::fs::write(&input, instance.to_string()).unwrap();
    let out = mmdim(dir.path(), &["tile-multiscale", "--input", input.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc = read_json(&dir.path().join("tile-multiscale.json"));
    assert_eq!(doc["result"]["residual_bound"], true);
    assert_eq!(doc["result"]["K"], 25);
}

#[test]
fn check_passes_on_the_golden_mean() {
    let dir = tempfile::tempdir().unwrap();
    let out = mmdim(dir.path(), &["check", "--system", "golden-mean", "--centers", "8"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let csv = std::fs::read_to_string(dir.path().join("check.csv")).unwrap();
    assert!(csv.lines().skip(2).all(|l| l.split(',').nth(1) == Some("true")));
}

#[test]
fn artifacts_do_not_depend_on_the_thread_count() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args = [
        "local",
        "--system",
        "golden-mean",
        "--centers",
        "16",
        "--windows",
        "1..10",
    ];
    assert!(mmdim(a.path(), &[&args[..], &["--threads", "1"]].concat())
        .status
        .success());
    assert!(mmdim(b.path(), &[&args[..], &["--threads", "4"]].concat())
        .status
        .success());
    for f in ["local.csv", "local.json"] {
        assert_eq!(
            std::fs::read(a.path().join(f)).unwrap(),
            std::fs::read(b.path().join(f)).unwrap()
        );
    }
}

#[test]
fn tiling_inputs_round_trip_through_json() {
    let omega = Region::cuboid(vec![q(0), qr(-1, 3)], vec![q(7), q(2)])
        .difference(&Region::cuboid(vec![q(1), q(0)], vec![q(2), q(1)]));
    let text = serde_json::to_string(&omega).unwrap();
    let back: Region = serde_json::from_str(&text).unwrap();
    assert!(back.same_as(&omega));
    let fam = Family::Grid(GridFamily::covering(&omega, vec![qr(1, 2), q(0)], q(3)).unwrap());
    let back: Family = serde_json::from_str(&serde_json::to_string(&fam).unwrap()).unwrap();
    assert_eq!(back.ell_max(), q(3));
}
