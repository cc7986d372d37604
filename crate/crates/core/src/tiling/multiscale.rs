//! Disjoint selection across several scale families, largest scale first:
//! at each step keep the cubes of the current family that meet the
//! `ℓ_max`-interior of what is still uncovered, then thin them with the
//! Vitali selection.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::region::{b_r, r_boundary, r_interior, AxisBox, Region};
use super::vitali::vitali_select;
use super::{q, qpow, Cube, CubeFamily, Q};
use crate::error::{Error, Result};

/// Smallest integer `K > 1` with `K · 3^{−D} · η/3 > 1` and
/// `(1 + 2/K)^D − (1 − 2/K)_+^D < η/3`, the relative collar volume of a cube
/// of side `ℓ ≥ K r` at radius `r`.
pub fn k_of_eta(eta: Q, dim: usize) -> Result<u64> {
    if eta <= Q::zero() {
        return Err(Error::usage(format!("eta must be positive, got {eta}")));
    }
    if dim == 0 {
        return Err(Error::usage("dimension must be positive"));
    }
    let third = eta / q(3);
    let scale = qpow(Q::new(1, 3), dim) * third;
    let mut k: u64 = 2;
    loop {
        let kq = q(k as i128);
        let outer = qpow(Q::one() + q(2) / kq, dim);
        let inner = (Q::one() - q(2) / kq).max(Q::zero());
        let collar = outer - qpow(inner, dim);
        if kq * scale > Q::one() && collar < third {
            return Ok(k);
        }
        k += 1;
    }
}

/// The cells `origin + side · (i + [0,1]^D)` for `lo ≤ i ≤ hi`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridFamily {
    pub origin: Vec<Q>,
    pub side: Q,
    pub lo: Vec<i64>,
    pub hi: Vec<i64>,
}

impl GridFamily {
    /// The smallest index range whose cells cover the region's bounding box.
    pub fn covering(region: &Region, origin: Vec<Q>, side: Q) -> Result<Self> {
        let bb = region
            .bounding_box()
            .ok_or_else(|| Error::usage("cannot cover an empty region"))?;
        if side <= Q::zero() {
            return Err(Error::usage("grid side must be positive"));
        }
        let lo = (0..bb.dim())
            .map(|i| ((bb.lo[i] - origin[i]) / side).floor().to_integer() as i64)
            .collect();
        let hi = (0..bb.dim())
            .map(|i| ((bb.hi[i] - origin[i]) / side).ceil().to_integer() as i64 - 1)
            .collect();
        Ok(GridFamily { origin, side, lo, hi })
    }

    fn block_box(&self, lo: &[i64], hi: &[i64]) -> AxisBox {
        AxisBox {
            lo: (0..lo.len())
                .map(|i| self.origin[i] + self.side * q(lo[i] as i128))
                .collect(),
            hi: (0..hi.len())
                .map(|i| self.origin[i] + self.side * q(hi[i] as i128 + 1))
                .collect(),
        }
    }

    /// Index block of cells meeting the closed box `b`, clipped to the family.
    fn touching(&self, b: &AxisBox) -> Option<(Vec<i64>, Vec<i64>)> {
        let mut lo = Vec::new();
        let mut hi = Vec::new();
        for i in 0..b.dim() {
            let a = ((b.lo[i] - self.origin[i]) / self.side).ceil().to_integer() as i64 - 1;
            let z = ((b.hi[i] - self.origin[i]) / self.side).floor().to_integer() as i64;
            let (a, z) = (a.max(self.lo[i]), z.min(self.hi[i]));
            if a > z {
                return None;
            }
            lo.push(a);
            hi.push(z);
        }
        Some((lo, hi))
    }

    fn index_of(&self, x: Q, i: usize) -> i64 {
        ((x - self.origin[i]) / self.side).to_integer() as i64
    }
}

/// A scale family: an explicit list of cubes or a full grid block.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Explicit { family: CubeFamily },
    Grid(GridFamily),
}

impl Family {
    pub fn dim(&self) -> usize {
        match self {
            Family::Explicit { family } => family.dim(),
            Family::Grid(g) => g.origin.len(),
        }
    }

    pub fn ell_max(&self) -> Q {
        match self {
            Family::Explicit { family } => family.ell_max,
            Family::Grid(g) => g.side,
        }
    }

    pub fn ell_min(&self) -> Q {
        match self {
            Family::Explicit { family } => family.ell_min,
            Family::Grid(g) => g.side,
        }
    }

    pub fn union(&self) -> Region {
        match self {
            Family::Explicit { family } => family.union(),
            Family::Grid(g) => Region::cuboid(g.block_box(&g.lo, &g.hi).lo, g.block_box(&g.lo, &g.hi).hi),
        }
    }
}

/// One selected piece: a cube, or a block of cells of a grid family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Selection {
    Cube {
        family: usize,
        cube: Cube,
    },
    Block {
        family: usize,
        lo: Vec<i64>,
        hi: Vec<i64>,
        region: AxisBox,
    },
}

impl Selection {
    pub fn as_box(&self) -> AxisBox {
        match self {
            Selection::Cube { cube, .. } => cube.as_box(),
            Selection::Block { region, .. } => region.clone(),
        }
    }

    /// Number of cubes this piece stands for.
    pub fn cube_count(&self) -> i128 {
        match self {
            Selection::Cube { .. } => 1,
            Selection::Block { lo, hi, .. } => lo.iter().zip(hi).map(|(a, b)| (b - a + 1) as i128).product(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepReport {
    /// 1-based index of the family used.
    pub family: usize,
    pub ell: Q,
    pub interior_volume: Q,
    pub small_interior: bool,
    pub candidates: i128,
    pub selected_cubes: i128,
    pub selected_volume: Q,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiscaleReport {
    pub eta: Q,
    #[serde(rename = "K")]
    pub k_param: u64,
    pub family_count: usize,
    pub steps: Vec<StepReport>,
    pub selection: Vec<Selection>,
    /// First step whose interior was already below `η/3 · vol(Ω)`.
    pub claim_k: Option<usize>,
    pub claim_established: bool,
    pub omega_volume: Q,
    pub residual_volume: Q,
    pub dilated_residual_volume: Q,
    pub disjoint: bool,
    pub contained: bool,
    pub residual_bound: bool,
}

impl MultiscaleReport {
    pub fn all_hold(&self) -> bool {
        self.disjoint && self.contained && self.residual_bound
    }
}

fn check_hypotheses(omega: &Region, families: &[Family], eta: Q, k: u64) -> Result<()> {
    let d = omega.dim();
    if families.is_empty() {
        return Err(Error::usage("need at least one family"));
    }
    if let Some(i) = families.iter().position(|f| f.dim() != d) {
        return Err(Error::usage(format!(
            "family {} has dimension {}, region has {d}",
            i + 1,
            families[i].dim()
        )));
    }
    let vol = omega.volume();
    if vol.is_zero() {
        return Err(Error::usage("region must have positive volume"));
    }
    if families[0].ell_max() < Q::one() {
        return Err(Error::precondition(
            "unit_scale",
            format!("ell_max(C_1) = {} < 1", families[0].ell_max()),
        ));
    }
    let kq = q(k as i128);
    for i in 1..families.len() {
        if families[i].ell_min() < kq * families[i - 1].ell_max() {
            return Err(Error::precondition(
                "scale_separation",
                format!(
                    "ell_min(C_{}) = {} < K · ell_max(C_{}) = {}",
                    i + 1,
                    families[i].ell_min(),
                    i,
                    kq * families[i - 1].ell_max()
                ),
            ));
        }
    }
    let top = families.last().unwrap().ell_max();
    let collar = r_boundary(omega, top).volume();
    if collar >= eta / q(3) * vol {
        return Err(Error::precondition(
            "boundary_volume",
            format!("vol ∂(Ω, {top}) = {collar} ≥ η/3 · vol Ω = {}", eta / q(3) * vol),
        ));
    }
    for (i, f) in families.iter().enumerate() {
        if !omega.is_subset(&f.union()) {
            return Err(Error::precondition(
                "coverage",
                format!("Ω is not covered by family C_{}", i + 1),
            ));
        }
    }
    Ok(())
}

fn select_step(idx: usize, family: &Family, interior: &Region) -> Result<(i128, Vec<Selection>)> {
    match family {
        Family::Explicit { family: f } => {
            let candidates: Vec<Cube> = f
                .cubes()
                .iter()
                .filter(|c| interior.touches(&c.as_box()))
                .cloned()
                .collect();
            if candidates.is_empty() {
                return Ok((0, Vec::new()));
            }
            let n = candidates.len() as i128;
            let report = vitali_select(&CubeFamily::new(candidates)?)?;
            let picked = report
                .selected
                .cubes()
                .iter()
                .map(|c| Selection::Cube {
                    family: idx,
                    cube: c.clone(),
                })
                .collect();
            Ok((n, picked))
        }
        Family::Grid(g) => {
            // Cells of a grid tile space, so the Vitali selection keeps all of them.
            let blocks: Vec<AxisBox> = interior
                .boxes()
                .iter()
                .filter_map(|b| g.touching(b))
                .map(|(lo, hi)| g.block_box(&lo, &hi))
                .collect();
            let merged = Region::from_boxes(g.origin.len(), blocks);
            let mut picked = Vec::new();
            let mut n = 0;
            for b in merged.boxes() {
                let lo: Vec<i64> = (0..b.dim()).map(|i| g.index_of(b.lo[i], i)).collect();
                let hi: Vec<i64> = (0..b.dim()).map(|i| g.index_of(b.hi[i], i) - 1).collect();
                let s = Selection::Block {
                    family: idx,
                    lo,
                    hi,
                    region: b,
                };
                n += s.cube_count();
                picked.push(s);
            }
            Ok((n, picked))
        }
    }
}

/// Picks disjoint cubes from `families` (ordered by increasing scale) that
/// cover all of `omega` except a part whose unit neighbourhood has volume
/// below `η · vol(Ω)`, checking the hypotheses first and the conclusions
/// afterwards in exact arithmetic.
pub fn multiscale_select(omega: &Region, families: &[Family], eta: Q) -> Result<MultiscaleReport> {
    let k = k_of_eta(eta, omega.dim())?;
    let omega = Region::from_boxes(omega.dim(), omega.boxes());
    check_hypotheses(&omega, families, eta, k)?;
    let vol = omega.volume();
    let threshold = eta / q(3) * vol;

    let mut rest = omega.clone();
    let mut steps = Vec::new();
    let mut selection: Vec<Selection> = Vec::new();
    for idx in (0..families.len()).rev() {
        let f = &families[idx];
        let ell = f.ell_max();
        let interior = r_interior(&rest, ell);
        let interior_volume = interior.volume();
        let (candidates, picked) = select_step(idx + 1, f, &interior)?;
        let chosen = Region::from_boxes(omega.dim(), picked.iter().map(Selection::as_box).collect());
        steps.push(StepReport {
            family: idx + 1,
            ell,
            small_interior: interior_volume < threshold,
            interior_volume,
            candidates,
            selected_cubes: picked.iter().map(Selection::cube_count).sum(),
            selected_volume: chosen.volume(),
        });
        rest = rest.difference(&chosen);
        selection.extend(picked);
    }

    let claim_k = steps.iter().position(|s| s.small_interior);
    if claim_k.is_none() && families.len() as u64 >= k {
        return Err(Error::Property(format!(
            "no step among {} families had interior volume below η/3 · vol Ω",
            families.len()
        )));
    }

    let pieces: Vec<AxisBox> = selection.iter().map(Selection::as_box).collect();
    let union = Region::from_boxes(omega.dim(), pieces.clone());
    let piece_volume = pieces.iter().map(AxisBox::volume).fold(Q::zero(), |a, b| a + b);
    let residual = omega.difference(&union);
    let dilated = b_r(&residual, Q::one()).volume();
    Ok(MultiscaleReport {
        eta,
        k_param: k,
        family_count: families.len(),
        steps,
        claim_established: claim_k.is_some(),
        claim_k,
        omega_volume: vol,
        residual_volume: residual.volume(),
        dilated_residual_volume: dilated,
        disjoint: union.volume() == piece_volume,
        contained: union.is_subset(&omega),
        residual_bound: dilated < eta * vol,
        selection,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tiling::qr;

    #[test]
    fn k_of_eta_values() {
        assert_eq!(k_of_eta(q(3), 1).unwrap(), 5);
        assert_eq!(k_of_eta(qr(1, 2), 1).unwrap(), 25);
        assert_eq!(k_of_eta(qr(3, 10), 1).unwrap(), 41);
        assert_eq!(k_of_eta(qr(1, 2), 2).unwrap(), 55);
        assert_eq!(k_of_eta(qr(3, 10), 2).unwrap(), 91);
        assert!(k_of_eta(q(0), 1).is_err());
    }

    #[test]
    fn k_of_eta_is_monotone_and_satisfies_both_conditions() {
        for d in 1..=3usize {
            let mut prev = 0;
            for e in [q(3), q(1), qr(1, 2), qr(3, 10), qr(1, 10)] {
                let k = k_of_eta(e, d).unwrap();
                assert!(k >= prev);
                prev = k;
                let kq = q(k as i128);
                assert!(kq * qpow(qr(1, 3), d) * e / q(3) > Q::one());
                let collar = qpow(Q::one() + q(2) / kq, d) - qpow((Q::one() - q(2) / kq).max(Q::zero()), d);
                assert!(collar < e / q(3));
            }
        }
    }

    #[test]
    fn perfect_tiling_leaves_nothing() {
        let omega = Region::cuboid(vec![q(0)], vec![q(100)]);
        let g = GridFamily::covering(&omega, vec![q(0)], q(1)).unwrap();
        let r = multiscale_select(&omega, &[Family::Grid(g)], qr(1, 2)).unwrap();
        assert!(r.all_hold());
        assert!(r.residual_volume.is_zero());
    }

    #[test]
    fn two_scales_on_an_interval() {
        let omega = Region::cuboid(vec![q(0)], vec![q(3000)]);
        let eta = qr(1, 2);
        let k = k_of_eta(eta, 1).unwrap() as i128;
        let unit = GridFamily::covering(&omega, vec![q(0)], q(1)).unwrap();
        let big = GridFamily::covering(&omega, vec![qr(1, 3)], q(k)).unwrap();
        let r = multiscale_select(&omega, &[Family::Grid(unit), Family::Grid(big)], eta).unwrap();
        assert!(r.all_hold(), "{r:?}");
    }

    #[test]
    fn hypothesis_violations_name_the_clause() {
        let omega = Region::cuboid(vec![q(0)], vec![q(3000)]);
        let eta = qr(1, 2);
        let unit = GridFamily::covering(&omega, vec![q(0)], q(1)).unwrap();
        let close = GridFamily::covering(&omega, vec![q(0)], q(2)).unwrap();
        let e = multiscale_select(&omega, &[Family::Grid(unit.clone()), Family::Grid(close)], eta).unwrap_err();
        assert!(matches!(e, Error::Precondition { ref clause, .. } if clause == "scale_separation"));
        let small = Region::cuboid(vec![q(0)], vec![q(10)]);
        let e = multiscale_select(&small, &[Family::Grid(unit.clone())], eta).unwrap_err();
        assert!(matches!(e, Error::Precondition { ref clause, .. } if clause == "boundary_volume"));
        let tiny = GridFamily::covering(&omega, vec![q(0)], qr(1, 2)).unwrap();
        let e = multiscale_select(&omega, &[Family::Grid(tiny)], eta).unwrap_err();
        assert!(matches!(e, Error::Precondition { ref clause, .. } if clause == "unit_scale"));
        let short = GridFamily {
            origin: vec![q(0)],
            side: q(1),
            lo: vec![0],
            hi: vec![10],
        };
        let e = multiscale_select(&omega, &[Family::Grid(short)], eta).unwrap_err();
        assert!(matches!(e, Error::Precondition { ref clause, .. } if clause == "coverage"));
    }

    #[test]
    fn explicit_family_step() {
        let omega = Region::cuboid(vec![q(0)], vec![q(200)]);
        let cubes: Vec<Cube> = (0..200).map(|i| Cube::new(vec![q(i)], q(1)).unwrap()).collect();
        let f = Family::Explicit {
            family: CubeFamily::new(cubes).unwrap(),
        };
        let r = multiscale_select(&omega, &[f], qr(1, 2)).unwrap();
        assert!(r.all_hold());
    }
}
