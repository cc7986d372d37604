//! Bounded regions as finite unions of closed axis boxes, plus a raster
//! representation used as an independent cross-check.
//!
//! Boolean operations compress coordinates: the breakpoints of all inputs cut
//! space into cells, each cell is painted in or out, and runs of painted cells
//! are merged back into boxes.

use std::collections::BTreeSet;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{q, qpow, Q};

/// Closed box `∏ [lo_i, hi_i]` with `lo_i < hi_i`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AxisBox {
    pub lo: Vec<Q>,
    pub hi: Vec<Q>,
}

impl AxisBox {
    pub fn new(lo: Vec<Q>, hi: Vec<Q>) -> Option<Self> {
        if lo.len() != hi.len() || lo.is_empty() || lo.iter().zip(&hi).any(|(a, b)| a >= b) {
            return None;
        }
        Some(AxisBox { lo, hi })
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn volume(&self) -> Q {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(a, b)| b - a)
            .fold(Q::one(), |acc, x| acc * x)
    }

    pub fn dilate(&self, r: Q) -> AxisBox {
        AxisBox {
            lo: self.lo.iter().map(|a| a - r).collect(),
            hi: self.hi.iter().map(|b| b + r).collect(),
        }
    }

    pub fn interiors_meet(&self, other: &AxisBox) -> bool {
        (0..self.dim()).all(|i| self.lo[i] < other.hi[i] && other.lo[i] < self.hi[i])
    }

    pub fn closed_meet(&self, other: &AxisBox) -> bool {
        (0..self.dim()).all(|i| self.lo[i] <= other.hi[i] && other.lo[i] <= self.hi[i])
    }

    pub fn contains_box(&self, other: &AxisBox) -> bool {
        (0..self.dim()).all(|i| self.lo[i] <= other.lo[i] && other.hi[i] <= self.hi[i])
    }
}

/// A bounded region of `R^D`, identified up to null sets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Region {
    /// Interior-disjoint closed boxes.
    BoxUnion {
        dim: usize,
        boxes: Vec<AxisBox>,
    },
    Raster(Raster),
}

struct Grid {
    breaks: Vec<Vec<Q>>,
    shape: Vec<usize>,
}

impl Grid {
    fn new(dim: usize, inputs: &[&[AxisBox]]) -> Grid {
        let mut breaks = vec![BTreeSet::new(); dim];
        for boxes in inputs {
            for b in boxes.iter() {
                for (i, axis) in breaks.iter_mut().enumerate() {
                    axis.insert(b.lo[i]);
                    axis.insert(b.hi[i]);
                }
            }
        }
        let breaks: Vec<Vec<Q>> = breaks.into_iter().map(|s| s.into_iter().collect()).collect();
        let shape = breaks.iter().map(|b| b.len().saturating_sub(1)).collect();
        Grid { breaks, shape }
    }

    fn len(&self) -> usize {
        self.shape.iter().product()
    }

    fn paint(&self, boxes: &[AxisBox]) -> Vec<bool> {
        let mut cells = vec![false; self.len()];
        if cells.is_empty() {
            return cells;
        }
        for b in boxes {
            let ranges: Vec<(usize, usize)> = (0..self.shape.len())
                .map(|i| {
                    let lo = self.breaks[i].binary_search(&b.lo[i]).expect("breakpoint");
                    let hi = self.breaks[i].binary_search(&b.hi[i]).expect("breakpoint");
                    (lo, hi)
                })
                .collect();
            self.for_each_in(&ranges, |idx| cells[idx] = true);
        }
        cells
    }

    /// Visits the flat indices (axis 0 fastest) of the cells in the given index ranges.
    fn for_each_in(&self, ranges: &[(usize, usize)], mut f: impl FnMut(usize)) {
        if ranges.iter().any(|(a, b)| a >= b) {
            return;
        }
        let mut pos: Vec<usize> = ranges.iter().map(|r| r.0).collect();
        loop {
            let mut flat = 0;
            for i in (0..pos.len()).rev() {
                flat = flat * self.shape[i] + pos[i];
            }
            f(flat);
            let mut axis = 0;
            loop {
                if axis == pos.len() {
                    return;
                }
                pos[axis] += 1;
                if pos[axis] < ranges[axis].1 {
                    break;
                }
                pos[axis] = ranges[axis].0;
                axis += 1;
            }
        }
    }

    fn boxes(&self, cells: &[bool]) -> Vec<AxisBox> {
        let dim = self.shape.len();
        let mut out = Vec::new();
        if cells.is_empty() {
            return out;
        }
        let n0 = self.shape[0];
        let rows = cells.len() / n0;
        for row in 0..rows {
            let mut rest = Vec::with_capacity(dim);
            let mut r = row;
            for i in 1..dim {
                rest.push(r % self.shape[i]);
                r /= self.shape[i];
            }
            let mut i = 0;
            while i < n0 {
                if !cells[row * n0 + i] {
                    i += 1;
                    continue;
                }
                let start = i;
                while i < n0 && cells[row * n0 + i] {
                    i += 1;
                }
                let mut lo = vec![self.breaks[0][start]];
                let mut hi = vec![self.breaks[0][i]];
                for (k, &p) in rest.iter().enumerate() {
                    lo.push(self.breaks[k + 1][p]);
                    hi.push(self.breaks[k + 1][p + 1]);
                }
                out.push(AxisBox { lo, hi });
            }
        }
        for axis in 1..dim {
            out = merge_along(out, axis);
        }
        out
    }
}

/// Merges boxes that agree off `axis` and abut along it.
fn merge_along(mut boxes: Vec<AxisBox>, axis: usize) -> Vec<AxisBox> {
    let key = |b: &AxisBox| {
        let mut k: Vec<Q> = Vec::new();
        for i in 0..b.dim() {
            if i != axis {
                k.push(b.lo[i]);
                k.push(b.hi[i]);
            }
        }
        k.push(b.lo[axis]);
        k
    };
    boxes.sort_by_key(key);
    let mut out: Vec<AxisBox> = Vec::with_capacity(boxes.len());
    for b in boxes {
        if let Some(last) = out.last_mut() {
            let same = (0..b.dim()).all(|i| i == axis || (last.lo[i] == b.lo[i] && last.hi[i] == b.hi[i]));
            if same && last.hi[axis] == b.lo[axis] {
                last.hi[axis] = b.hi[axis];
                continue;
            }
        }
        out.push(b);
    }
    out
}

#[derive(Clone, Copy)]
enum Op {
    Union,
    Intersection,
    Difference,
}

impl Region {
    pub fn empty(dim: usize) -> Region {
        Region::BoxUnion { dim, boxes: Vec::new() }
    }

    /// Union of arbitrary (possibly overlapping or degenerate) boxes.
    pub fn from_boxes(dim: usize, boxes: Vec<AxisBox>) -> Region {
        let boxes: Vec<AxisBox> = boxes
            .into_iter()
            .filter(|b| b.dim() == dim && b.lo.iter().zip(&b.hi).all(|(a, c)| a < c))
            .collect();
        let g = Grid::new(dim, &[&boxes]);
        let cells = g.paint(&boxes);
        Region::BoxUnion {
            dim,
            boxes: g.boxes(&cells),
        }
    }

    pub fn from_box(b: AxisBox) -> Region {
        Region::BoxUnion {
            dim: b.dim(),
            boxes: vec![b],
        }
    }

    /// `∏ [lo_i, hi_i]`, empty if degenerate.
    pub fn cuboid(lo: Vec<Q>, hi: Vec<Q>) -> Region {
        let dim = lo.len();
        match AxisBox::new(lo, hi) {
            Some(b) => Region::from_box(b),
            None => Region::empty(dim),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Region::BoxUnion { dim, .. } => *dim,
            Region::Raster(r) => r.dim,
        }
    }

    /// Interior-disjoint boxes making up the region.
    pub fn boxes(&self) -> Vec<AxisBox> {
        match self {
            Region::BoxUnion { boxes, .. } => boxes.clone(),
            Region::Raster(r) => r.to_boxes(),
        }
    }

    pub fn volume(&self) -> Q {
        match self {
            Region::BoxUnion { boxes, .. } => boxes.iter().map(AxisBox::volume).fold(Q::zero(), |a, b| a + b),
            Region::Raster(r) => r.volume(),
        }
    }

    pub fn is_null(&self) -> bool {
        self.volume().is_zero()
    }

    pub fn bounding_box(&self) -> Option<AxisBox> {
        let boxes = self.boxes();
        let first = boxes.first()?;
        let mut lo = first.lo.clone();
        let mut hi = first.hi.clone();
        for b in &boxes[1..] {
            for i in 0..lo.len() {
                lo[i] = lo[i].min(b.lo[i]);
                hi[i] = hi[i].max(b.hi[i]);
            }
        }
        Some(AxisBox { lo, hi })
    }

    fn combine(&self, other: &Region, op: Op) -> Region {
        if let (Region::Raster(a), Region::Raster(b)) = (self, other) {
            if a.h == b.h && a.origin == b.origin {
                return Region::Raster(a.combine(b, op));
            }
        }
        let dim = self.dim();
        let a = self.boxes();
        let b = other.boxes();
        let g = Grid::new(dim, &[&a, &b]);
        let pa = g.paint(&a);
        let pb = g.paint(&b);
        let cells: Vec<bool> = pa
            .iter()
            .zip(&pb)
            .map(|(x, y)| match op {
                Op::Union => *x || *y,
                Op::Intersection => *x && *y,
                Op::Difference => *x && !*y,
            })
            .collect();
        Region::BoxUnion {
            dim,
            boxes: g.boxes(&cells),
        }
    }

    pub fn union(&self, other: &Region) -> Region {
        self.combine(other, Op::Union)
    }

    pub fn intersection(&self, other: &Region) -> Region {
        self.combine(other, Op::Intersection)
    }

    pub fn difference(&self, other: &Region) -> Region {
        self.combine(other, Op::Difference)
    }

    /// `A ⊆ B` up to a null set.
    pub fn is_subset(&self, other: &Region) -> bool {
        self.difference(other).is_null()
    }

    pub fn same_as(&self, other: &Region) -> bool {
        self.is_subset(other) && other.is_subset(self)
    }

    /// Closed meet of some box with `b`.
    pub fn touches(&self, b: &AxisBox) -> bool {
        self.boxes().iter().any(|x| x.closed_meet(b))
    }

    /// Complement inside the bounding box grown by `margin`.
    fn local_complement(&self, margin: Q) -> Region {
        match self.bounding_box() {
            None => Region::empty(self.dim()),
            Some(bb) => Region::from_box(bb.dilate(margin)).difference(self),
        }
    }

    pub fn as_raster(&self, h: Q, origin: Vec<Q>) -> Raster {
        Raster::from_region(self, h, origin)
    }
}

/// `B_r(Ω) = {x : ∃ y ∈ Ω, |x − y|_∞ ≤ r}`.
pub fn b_r(omega: &Region, r: Q) -> Region {
    match omega {
        Region::Raster(g) => {
            let (k, exact) = g.cells_for(r);
            let mut out = g.dilate(k);
            out.exact &= exact;
            Region::Raster(out)
        }
        Region::BoxUnion { dim, boxes } => Region::from_boxes(*dim, boxes.iter().map(|b| b.dilate(r)).collect()),
    }
}

/// `int(Ω, r) = {x ∈ Ω : x + [−r, r]^D ⊆ Ω}`.
pub fn r_interior(omega: &Region, r: Q) -> Region {
    match omega {
        Region::Raster(g) => {
            let (k, exact) = g.cells_for(r);
            let mut out = g.erode(k);
            out.exact &= exact;
            Region::Raster(out)
        }
        Region::BoxUnion { .. } => omega.difference(&b_r(&omega.local_complement(q(2) * r), r)),
    }
}

/// `∂(Ω, r) = B_r(Ω) ∩ B_r(R^D ∖ Ω)`.
pub fn r_boundary(omega: &Region, r: Q) -> Region {
    match omega {
        Region::Raster(g) => {
            let (k, exact) = g.cells_for(r);
            let mut out = g
                .dilate(k)
                .combine(&g.complement_ring(2 * k).dilate(k), Op::Intersection);
            out.exact &= exact;
            Region::Raster(out)
        }
        Region::BoxUnion { .. } => b_r(omega, r).intersection(&b_r(&omega.local_complement(q(2) * r), r)),
    }
}

/// Occupied cells `origin + h·(c + [0,1]^D)` of a uniform grid.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Raster {
    pub dim: usize,
    pub h: Q,
    pub origin: Vec<Q>,
    pub cells: BTreeSet<Vec<i64>>,
    /// True when every radius so far was a whole number of cells.
    pub exact: bool,
}

impl Raster {
    /// Cells whose centre lies in the region (exact for grid-aligned regions).
    pub fn from_region(region: &Region, h: Q, origin: Vec<Q>) -> Raster {
        let dim = region.dim();
        let mut cells = BTreeSet::new();
        let half = h / q(2);
        for b in region.boxes() {
            let range: Vec<(i64, i64)> = (0..dim)
                .map(|i| {
                    let a = ((b.lo[i] - origin[i] - half) / h).ceil().to_integer() as i64;
                    let z = ((b.hi[i] - origin[i] - half) / h).floor().to_integer() as i64;
                    (a, z)
                })
                .collect();
            for c in lattice_box(&range) {
                cells.insert(c);
            }
        }
        Raster {
            dim,
            h,
            origin,
            cells,
            exact: true,
        }
    }

    /// Radius in whole cells, rounded up; clears `exact` when rounding happened.
    fn cells_for(&self, r: Q) -> (i64, bool) {
        let k = (r / self.h).ceil();
        (k.to_integer() as i64, k * self.h == r)
    }

    fn with_cells(&self, cells: BTreeSet<Vec<i64>>, exact: bool) -> Raster {
        Raster {
            dim: self.dim,
            h: self.h,
            origin: self.origin.clone(),
            cells,
            exact: self.exact && exact,
        }
    }

    fn dilate(&self, k: i64) -> Raster {
        let offsets = lattice_box(&vec![(-k, k); self.dim]);
        let mut out = BTreeSet::new();
        for c in &self.cells {
            for o in &offsets {
                out.insert(c.iter().zip(o).map(|(a, b)| a + b).collect());
            }
        }
        self.with_cells(out, true)
    }

    fn erode(&self, k: i64) -> Raster {
        let offsets = lattice_box(&vec![(-k, k); self.dim]);
        let cells = self
            .cells
            .iter()
            .filter(|c| {
                offsets.iter().all(|o| {
                    self.cells
                        .contains(&c.iter().zip(o).map(|(a, b)| a + b).collect::<Vec<i64>>())
                })
            })
            .cloned()
            .collect();
        self.with_cells(cells, true)
    }

    /// Unoccupied cells within `k` cells of the occupied bounding box.
    fn complement_ring(&self, k: i64) -> Raster {
        let mut range = vec![(i64::MAX, i64::MIN); self.dim];
        for c in &self.cells {
            for i in 0..self.dim {
                range[i].0 = range[i].0.min(c[i] - k);
                range[i].1 = range[i].1.max(c[i] + k);
            }
        }
        let cells = if self.cells.is_empty() {
            BTreeSet::new()
        } else {
            lattice_box(&range)
                .into_iter()
                .filter(|c| !self.cells.contains(c))
                .collect()
        };
        self.with_cells(cells, true)
    }

    fn combine(&self, other: &Raster, op: Op) -> Raster {
        let cells = match op {
            Op::Union => self.cells.union(&other.cells).cloned().collect(),
            Op::Intersection => self.cells.intersection(&other.cells).cloned().collect(),
            Op::Difference => self.cells.difference(&other.cells).cloned().collect(),
        };
        let mut out = self.with_cells(cells, true);
        out.exact &= other.exact;
        out
    }

    pub fn volume(&self) -> Q {
        q(self.cells.len() as i128) * qpow(self.h, self.dim)
    }

    pub fn to_boxes(&self) -> Vec<AxisBox> {
        let boxes = self
            .cells
            .iter()
            .map(|c| AxisBox {
                lo: (0..self.dim)
                    .map(|i| self.origin[i] + self.h * q(c[i] as i128))
                    .collect(),
                hi: (0..self.dim)
                    .map(|i| self.origin[i] + self.h * q(c[i] as i128 + 1))
                    .collect(),
            })
            .collect();
        Region::from_boxes(self.dim, boxes).boxes()
    }
}

fn lattice_box(range: &[(i64, i64)]) -> Vec<Vec<i64>> {
    let mut out: Vec<Vec<i64>> = vec![Vec::new()];
    for &(a, b) in range {
        let mut next = Vec::new();
        for p in &out {
            for x in a..=b {
                let mut v = p.clone();
                v.push(x);
                next.push(v);
            }
        }
        out = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tiling::qr;

    fn iv(a: i128, b: i128) -> AxisBox {
        AxisBox::new(vec![q(a)], vec![q(b)]).unwrap()
    }

    fn line(parts: &[(i128, i128)]) -> Region {
        Region::from_boxes(1, parts.iter().map(|&(a, b)| iv(a, b)).collect())
    }

    #[test]
    fn interval_examples() {
        let omega = line(&[(0, 10)]);
        assert_eq!(r_interior(&omega, q(2)), line(&[(2, 8)]));
        assert_eq!(r_boundary(&omega, q(2)), line(&[(-2, 2), (8, 12)]));
        assert_eq!(b_r(&omega, q(1)), line(&[(-1, 11)]));
        assert!(r_interior(&line(&[(0, 1)]), q(1)).is_null());
    }

    #[test]
    fn two_interval_examples() {
        let omega = line(&[(0, 4), (6, 10)]);
        assert_eq!(r_interior(&omega, q(1)), line(&[(1, 3), (7, 9)]));
        assert_eq!(r_boundary(&omega, q(1)), line(&[(-1, 1), (3, 7), (9, 11)]));
        let empty = Region::empty(1);
        assert!(r_boundary(&empty, q(1)).is_null());
        assert!(b_r(&empty, q(1)).is_null());
    }

    #[test]
    fn square_dilation() {
        let sq = Region::cuboid(vec![q(0), q(0)], vec![q(1), q(1)]);
        let d = b_r(&sq, q(1));
        assert_eq!(d.volume(), q(9));
        assert_eq!(d.bounding_box().unwrap().lo, vec![q(-1), q(-1)]);
    }

    #[test]
    fn adjacent_boxes_merge() {
        let r = Region::from_boxes(
            2,
            vec![
                AxisBox::new(vec![q(0), q(0)], vec![q(1), q(2)]).unwrap(),
                AxisBox::new(vec![q(1), q(0)], vec![q(3), q(2)]).unwrap(),
            ],
        );
        assert_eq!(r.boxes().len(), 1);
        assert_eq!(r.volume(), q(6));
    }

    #[test]
    fn raster_agrees_on_grid_aligned_instances() {
        let l_shape = Region::from_boxes(
            2,
            vec![
                AxisBox::new(vec![q(0), q(0)], vec![q(6), q(2)]).unwrap(),
                AxisBox::new(vec![q(0), q(2)], vec![q(2), q(5)]).unwrap(),
            ],
        );
        let ras = Region::Raster(l_shape.as_raster(qr(1, 2), vec![q(0), q(0)]));
        assert_eq!(ras.volume(), l_shape.volume());
        for r in [qr(1, 2), q(1)] {
            assert!(r_interior(&ras, r).same_as(&r_interior(&l_shape, r)));
            assert!(r_boundary(&ras, r).same_as(&r_boundary(&l_shape, r)));
            assert!(b_r(&ras, r).same_as(&b_r(&l_shape, r)));
        }
    }
}
