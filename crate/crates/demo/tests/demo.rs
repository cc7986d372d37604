use mmdim_demo::{local_vs_global_json, mmdim_curve_json, vitali_json};
use serde_json::Value;

#[test]
fn curve_for_the_hilbert_cube_is_near_one() {
    let v: Value = serde_json::from_str(&mmdim_curve_json("hilbert-cube", 3, 7, 6, 9).unwrap()).unwrap();
    let upper = v["upper"].as_f64().unwrap();
    assert!((0.85..=1.15).contains(&upper), "{upper}");
    assert_eq!(v["points"].as_array().unwrap().len(), 5);
}

#[test]
fn vitali_on_two_overlapping_squares() {
    let family = r#"{"cubes": [
        {"corner": [[0, 1], [0, 1]], "side": [2, 1]},
        {"corner": [[1, 1], [1, 1]], "side": [2, 1]}
    ]}"#;
    let v: Value = serde_json::from_str(&vitali_json(family).unwrap()).unwrap();
    assert_eq!(v["selected_indices"], serde_json::json!([0]));
    assert_eq!(v["volume_bound"], true);
}

#[test]
fn comparison_and_errors() {
    let v: Value = serde_json::from_str(&local_vs_global_json("full-shift-2", 8, 1, 1, 4, 8, 0).unwrap()).unwrap();
    assert_eq!(v["gap_upper"].as_f64(), Some(0.0));
    assert!(mmdim_curve_json("unknown", 1, 4, 4, 0)
        .unwrap_err()
        .contains("unknown system"));
    assert!(vitali_json("{}").is_err());
}
