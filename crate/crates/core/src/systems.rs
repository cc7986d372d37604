//! Built-in example systems with known or oracle-computable invariants.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::system::{PointKind, SystemSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleKind {
    Cylinder,
    TransferMatrix,
    Grid,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SystemCatalogEntry {
    pub spec: SystemSpec,
    /// Closed form of `S(X, ε)` where one is known.
    #[serde(rename = "known_S")]
    pub known_s: Option<String>,
    pub known_mmdim: Option<f64>,
    /// Where the known values come from.
    pub provenance: String,
    pub expansivity_constant: Option<f64>,
    pub oracle: OracleKind,
}

fn oracle_for(s: &SystemSpec) -> OracleKind {
    let leaves = s.leaves();
    if leaves.iter().any(|l| l.point_kind == PointKind::IntervalProduct) {
        OracleKind::Grid
    } else if leaves.iter().any(|l| l.transition_matrix.is_some()) {
        OracleKind::TransferMatrix
    } else {
        OracleKind::Cylinder
    }
}

fn entry(
    spec: SystemSpec,
    known_s: &str,
    mmdim: f64,
    provenance: &str,
    expansivity: Option<f64>,
) -> SystemCatalogEntry {
    SystemCatalogEntry {
        oracle: oracle_for(&spec),
        spec,
        known_s: Some(known_s.to_string()),
        known_mmdim: Some(mmdim),
        provenance: provenance.to_string(),
        expansivity_constant: expansivity,
    }
}

pub fn catalog() -> Vec<SystemCatalogEntry> {
    let golden = SystemSpec::subshift("golden-mean", vec![vec![1, 1], vec![1, 0]]);
    vec![
        entry(
            SystemSpec::full_shift("one-point", 1, 1),
            "0 for every ε",
            0.0,
            "single orbit: every covering number is 1",
            Some(1.0),
        ),
        entry(
            SystemSpec::full_shift("full-shift-2", 2, 1),
            "log 2 for all ε < 1 (dyadic)",
            0.0,
            "cylinder counts 2^{N + 2R} for relevant radius R",
            Some(1.0),
        ),
        entry(
            SystemSpec::full_shift("full-shift-3", 3, 1),
            "log 3 for all ε < 1 (dyadic)",
            0.0,
            "cylinder counts 3^{N + 2R} for relevant radius R",
            Some(1.0),
        ),
        entry(
            golden,
            "log((1 + √5)/2) for all ε < 1",
            0.0,
            "admissible word counts are Fibonacci numbers",
            Some(1.0),
        ),
        entry(
            SystemSpec::interval_product("hilbert-cube", 1, 1),
            "log ⌈1/(2ε)⌉ per site; (m − 1) log 2 at ε = 2^{−m}",
            1.0,
            "analytic product count: ⌈len/(2ρ)⌉ points per coordinate",
            None,
        ),
        entry(
            SystemSpec::interval_product("interval-product-2", 2, 1),
            "2 log ⌈1/(2ε)⌉; 2(m − 1) log 2 at ε = 2^{−m}",
            2.0,
            "analytic product count on ([0,1]^2)^Z",
            None,
        ),
        entry(
            SystemSpec::full_shift("full-shift-2-z2", 2, 2),
            "log 2 per lattice site for all ε < 1 (dyadic)",
            0.0,
            "cylinder counts 2^{(N + 2R)^2}",
            Some(1.0),
        ),
    ]
}

/// Catalog entry by id.
pub fn lookup(id: &str) -> Result<SystemCatalogEntry> {
    catalog().into_iter().find(|e| e.spec.id == id).ok_or_else(|| {
        let ids: Vec<String> = catalog().into_iter().map(|e| e.spec.id).collect();
        Error::usage(format!("unknown system id '{id}' (known: {})", ids.join(", ")))
    })
}

/// Product system with the max of the factors' per-site distances.
pub fn build_product(entries: &[SystemCatalogEntry]) -> Result<SystemCatalogEntry> {
    if entries.is_empty() {
        return Err(Error::usage("product needs at least one factor"));
    }
    let id = entries.iter().map(|e| e.spec.id.as_str()).collect::<Vec<_>>().join("×");
    let spec = SystemSpec::product(id, entries.iter().map(|e| e.spec.clone()).collect())?;
    let known_mmdim = entries.iter().map(|e| e.known_mmdim).sum::<Option<f64>>();
    let expansivity = entries
        .iter()
        .map(|e| e.expansivity_constant)
        .collect::<Option<Vec<f64>>>()
        .map(|v| v.into_iter().fold(f64::INFINITY, f64::min));
    Ok(SystemCatalogEntry {
        oracle: oracle_for(&spec),
        spec,
        known_s: None,
        known_mmdim,
        provenance: "sum of the factors' values; entropies add on product oracles".to_string(),
        expansivity_constant: expansivity,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covering::{exact_covering_number, PointSet};
    use crate::entropy::{entropy_at_scale, mmdim_estimate, CountMethod, EntropyOptions};
    use crate::lattice::Window;

    #[test]
    fn catalog_is_valid() {
        let c = catalog();
        assert!(c.len() >= 7);
        for e in &c {
            e.spec.validate().unwrap();
        }
        assert_eq!(lookup("golden-mean").unwrap().oracle, OracleKind::TransferMatrix);
        assert_eq!(lookup("hilbert-cube").unwrap().oracle, OracleKind::Grid);
        assert!(matches!(lookup("nope"), Err(Error::Usage(_))));
    }

    #[test]
    fn product_of_two_shifts_is_four_symbols() {
        let p = build_product(&[lookup("full-shift-2").unwrap(), lookup("full-shift-2").unwrap()]).unwrap();
        let c = entropy_at_scale(
            &p.spec,
            &PointSet::whole(&p.spec),
            0.25,
            &[1, 2, 3, 4, 5, 6],
            &Default::default(),
        )
        .unwrap();
        assert!((c.fitted_s - 4f64.ln()).abs() < 1e-9);
        assert_eq!(p.known_mmdim, Some(0.0));
    }

    #[test]
    fn product_with_a_point_changes_nothing() {
        let fs = lookup("full-shift-3").unwrap();
        let p = build_product(&[fs.clone(), lookup("one-point").unwrap()]).unwrap();
        for n in 1..5 {
            let w = Window::cube(1, n).unwrap();
            let a = exact_covering_number(&fs.spec, &PointSet::whole(&fs.spec), &w, 0.125).unwrap();
            let b = exact_covering_number(&p.spec, &PointSet::whole(&p.spec), &w, 0.125).unwrap();
            assert_eq!(a.cardinality, b.cardinality);
        }
    }

    #[test]
    fn product_of_hilbert_cubes_has_dimension_two() {
        let h = lookup("hilbert-cube").unwrap();
        let p = build_product(&[h.clone(), h]).unwrap();
        let eps: Vec<f64> = (3..=7).map(|m| 0.5f64.powi(m)).collect();
        let opts = EntropyOptions {
            method: CountMethod::Grid { step: 0.5f64.powi(9) },
            ..Default::default()
        };
        let e = mmdim_estimate(&p.spec, &eps, &[1, 2, 3, 4], &opts).unwrap();
        assert!((e.upper - 2.0).abs() < 0.3 && (e.lower - 2.0).abs() < 0.3, "{e:?}");
    }

    #[test]
    fn mixed_dimensions_are_rejected() {
        let e = build_product(&[lookup("full-shift-2").unwrap(), lookup("full-shift-2-z2").unwrap()]);
        assert!(matches!(e, Err(Error::Usage(_))));
    }
}
