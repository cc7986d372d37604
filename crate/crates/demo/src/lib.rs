//! Browser demo: thin JSON-returning wrappers over the core crate.

use mmdim_core::entropy::{mmdim_estimate, CountMethod, EntropyOptions};
use mmdim_core::local::{compare, sample_centers};
use mmdim_core::systems::lookup;
use mmdim_core::tiling::{vitali_select, CubeFamily};
use wasm_bindgen::prelude::*;

fn options(grid_exp: u32) -> EntropyOptions {
    EntropyOptions {
        method: if grid_exp == 0 {
            CountMethod::Exact
        } else {
            CountMethod::Grid {
                step: 0.5f64.powi(grid_exp as i32),
            }
        },
        ..Default::default()
    }
}

fn scales(min_exp: u32, max_exp: u32) -> Vec<f64> {
    (min_exp..=max_exp).map(|m| 0.5f64.powi(m as i32)).collect()
}

fn sizes(max_window: u32) -> Vec<i64> {
    (1..=max_window as i64).collect()
}

/// Entropy-at-scale points and mean-dimension estimate for a catalog system,
/// at `ε = 2^-min_exp … 2^-max_exp`; `grid_exp = 0` selects exact counts.
pub fn mmdim_curve_json(
    system: &str,
    min_exp: u32,
    max_exp: u32,
    max_window: u32,
    grid_exp: u32,
) -> Result<String, String> {
    let s = lookup(system).map_err(|e| e.to_string())?.spec;
    let est = mmdim_estimate(&s, &scales(min_exp, max_exp), &sizes(max_window), &options(grid_exp))
        .map_err(|e| e.to_string())?;
    serde_json::to_string(&est).map_err(|e| e.to_string())
}

/// Vitali selection on a cube family given as JSON.
pub fn vitali_json(family: &str) -> Result<String, String> {
    let family: CubeFamily = serde_json::from_str(family).map_err(|e| e.to_string())?;
    let report = vitali_select(&family).map_err(|e| e.to_string())?;
    serde_json::to_string(&report).map_err(|e| e.to_string())
}

/// Global estimate next to the Bowen-ball estimate at a quarter of the diameter.
pub fn local_vs_global_json(
    system: &str,
    centers: usize,
    seed: u64,
    min_exp: u32,
    max_exp: u32,
    max_window: u32,
    grid_exp: u32,
) -> Result<String, String> {
    let s = lookup(system).map_err(|e| e.to_string())?.spec;
    let pts = sample_centers(&s, centers, seed).map_err(|e| e.to_string())?;
    let r = compare(
        &s,
        s.diameter / 4.0,
        &scales(min_exp, max_exp),
        &pts,
        &sizes(max_window),
        &options(grid_exp),
    )
    .map_err(|e| e.to_string())?;
    serde_json::to_string(&r).map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn mmdim_curve(
    system: &str,
    min_exp: u32,
    max_exp: u32,
    max_window: u32,
    grid_exp: u32,
) -> Result<String, JsError> {
    mmdim_curve_json(system, min_exp, max_exp, max_window, grid_exp).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn vitali(family: &str) -> Result<String, JsError> {
    vitali_json(family).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn local_vs_global(
    system: &str,
    centers: usize,
    seed: u64,
    min_exp: u32,
    max_exp: u32,
    max_window: u32,
    grid_exp: u32,
) -> Result<String, JsError> {
    local_vs_global_json(system, centers, seed, min_exp, max_exp, max_window, grid_exp).map_err(|e| JsError::new(&e))
}
