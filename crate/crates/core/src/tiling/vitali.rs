//! Greedy Vitali selection: largest cubes first, keeping a cube when its
//! interior misses every cube kept so far.

use serde::{Deserialize, Serialize};

use super::{q, qpow, Cube, CubeFamily, Region, Q};
use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VitaliReport {
    /// Indices into the input family, in selection order.
    pub selected_indices: Vec<usize>,
    pub selected: CubeFamily,
    pub union_volume: Q,
    pub selected_volume: Q,
    pub disjoint: bool,
    pub covered_by_tripled: bool,
    pub volume_bound: bool,
}

impl VitaliReport {
    pub fn all_hold(&self) -> bool {
        self.disjoint && self.covered_by_tripled && self.volume_bound
    }
}

/// Selection order: larger side first, then lower input index.
fn greedy(cubes: &[Cube]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..cubes.len()).collect();
    order.sort_by(|&a, &b| cubes[b].side.cmp(&cubes[a].side).then(a.cmp(&b)));
    let mut chosen: Vec<usize> = Vec::new();
    for i in order {
        if chosen.iter().all(|&c| !cubes[c].interiors_meet(&cubes[i])) {
            chosen.push(i);
        }
    }
    chosen
}

/// Selects a disjoint subfamily and verifies its three defining properties
/// by direct set algebra.
pub fn vitali_select(family: &CubeFamily) -> Result<VitaliReport> {
    let cubes = family.cubes();
    let d = family.dim();
    let idx = greedy(cubes);
    let selected = CubeFamily::new(idx.iter().map(|&i| cubes[i].clone()).collect())?;

    let selected_volume = selected.cubes().iter().map(Cube::volume).fold(q(0), |a, b| a + b);
    let selected_union = selected.union();
    let disjoint = selected_union.volume() == selected_volume;

    let tripled = Region::from_boxes(d, selected.cubes().iter().map(|c| c.tripled().as_box()).collect());
    let covered_by_tripled = cubes.iter().all(|c| Region::from_box(c.as_box()).is_subset(&tripled));

    let union_volume = family.union().volume();
    let volume_bound = selected_union.volume() * qpow(q(3), d) >= union_volume;

    Ok(VitaliReport {
        selected_indices: idx,
        selected,
        union_volume,
        selected_volume,
        disjoint,
        covered_by_tripled,
        volume_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tiling::qr;

    fn c1(a: Q, l: Q) -> Cube {
        Cube::new(vec![a], l).unwrap()
    }

    #[test]
    fn single_cube() {
        let f = CubeFamily::new(vec![c1(q(2), q(3))]).unwrap();
        let r = vitali_select(&f).unwrap();
        assert_eq!(r.selected_indices, vec![0]);
        assert!(r.all_hold());
    }

    #[test]
    fn overlapping_equal_sides_keep_lowest_index() {
        let f = CubeFamily::new(vec![c1(q(0), q(1)), c1(qr(1, 2), q(1)), c1(q(10), q(1))]).unwrap();
        let r = vitali_select(&f).unwrap();
        assert_eq!(r.selected_indices, vec![0, 2]);
        assert!(r.all_hold());
        assert_eq!(r.selected.cubes()[0].tripled(), c1(q(-1), q(3)));
    }

    #[test]
    fn adjacent_cubes_are_both_kept() {
        let f = CubeFamily::new(vec![c1(q(0), q(1)), c1(q(1), q(1))]).unwrap();
        let r = vitali_select(&f).unwrap();
        assert_eq!(r.selected_indices, vec![0, 1]);
        assert!(r.all_hold());
    }
}
