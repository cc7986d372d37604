//! Dynamical systems over `Z^D`: specifications, finite-window points, the
//! shift action and the base/orbit metrics.
//!
//! Every built-in metric is a weighted sup over lattice sites,
//!
//! ```text
//! d(x, y) = sup_j 2^{-|j|_∞} · δ_j(x_j, y_j)
//! ```
//!
//! where `δ_j` is the discrete metric on symbols (`dyadic_sup`) or the sup-norm
//! on `[0,1]^m` (`weighted_sup`); products take the max of their factors'
//! `δ_j`. Consequently the orbit metric over a window `w` is
//! `d_w(x, y) = sup_j 2^{-dist(j, w)} · δ_j(x_j, y_j)`, which is what makes
//! exact covering counts possible.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{sup_norm, Site, Window};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PointKind {
    Symbolic,
    IntervalProduct,
    ProductOfSystems,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricKind {
    DyadicSup,
    WeightedSup,
}

/// A dynamical system: the point space, the `Z^D` shift action and the base metric.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SystemSpec {
    pub id: String,
    pub lattice_dim: usize,
    pub point_kind: PointKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alphabet_size: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coordinate_dim: Option<usize>,
    pub metric_kind: MetricKind,
    pub diameter: f64,
    /// 0/1 adjacency matrix of a one-dimensional subshift of finite type.
    /// Absent means the full shift.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transition_matrix: Option<Vec<Vec<u8>>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub factors: Vec<SystemSpec>,
}

impl SystemSpec {
    pub fn full_shift(id: impl Into<String>, symbols: u32, lattice_dim: usize) -> Self {
        SystemSpec {
            id: id.into(),
            lattice_dim,
            point_kind: PointKind::Symbolic,
            alphabet_size: Some(symbols),
            coordinate_dim: None,
            metric_kind: MetricKind::DyadicSup,
            diameter: if symbols > 1 { 1.0 } else { 0.0 },
            transition_matrix: None,
            factors: Vec::new(),
        }
    }

    pub fn subshift(id: impl Into<String>, matrix: Vec<Vec<u8>>) -> Self {
        let k = matrix.len() as u32;
        SystemSpec {
            transition_matrix: Some(matrix),
            ..Self::full_shift(id, k, 1)
        }
    }

    /// `([0,1]^m)^{Z^D}` with the weighted sup metric.
    pub fn interval_product(id: impl Into<String>, coordinate_dim: usize, lattice_dim: usize) -> Self {
        SystemSpec {
            id: id.into(),
            lattice_dim,
            point_kind: PointKind::IntervalProduct,
            alphabet_size: None,
            coordinate_dim: Some(coordinate_dim),
            metric_kind: MetricKind::WeightedSup,
            diameter: 1.0,
            transition_matrix: None,
            factors: Vec::new(),
        }
    }

    pub fn product(id: impl Into<String>, factors: Vec<SystemSpec>) -> Result<Self> {
        let Some(first) = factors.first() else {
            return Err(Error::usage("product needs at least one factor"));
        };
        let lattice_dim = first.lattice_dim;
        if factors.iter().any(|f| f.lattice_dim != lattice_dim) {
            return Err(Error::usage("product factors must share the lattice dimension"));
        }
        let diameter = factors.iter().map(|f| f.diameter).fold(0.0, f64::max);
        let spec = SystemSpec {
            id: id.into(),
            lattice_dim,
            point_kind: PointKind::ProductOfSystems,
            alphabet_size: None,
            coordinate_dim: None,
            metric_kind: MetricKind::WeightedSup,
            diameter,
            transition_matrix: None,
            factors,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Checks the structural invariants, including that `diameter` is the exact diameter.
    pub fn validate(&self) -> Result<()> {
        if self.lattice_dim == 0 {
            return Err(Error::usage(format!("{}: lattice_dim must be positive", self.id)));
        }
        match self.point_kind {
            PointKind::Symbolic => {
                let k = self.alphabet_size.unwrap_or(0);
                if k == 0 || k > 64 {
                    return Err(Error::usage(format!("{}: alphabet_size must be in 1..=64", self.id)));
                }
                if self.metric_kind != MetricKind::DyadicSup {
                    return Err(Error::usage(format!("{}: symbolic systems use dyadic_sup", self.id)));
                }
                if let Some(m) = &self.transition_matrix {
                    if self.lattice_dim != 1 {
                        return Err(Error::usage(format!(
                            "{}: transition matrices need lattice_dim 1",
                            self.id
                        )));
                    }
                    if m.len() != k as usize || m.iter().any(|row| row.len() != k as usize) {
                        return Err(Error::usage(format!("{}: transition matrix must be {k}×{k}", self.id)));
                    }
                    if m.iter().flatten().any(|&e| e > 1) {
                        return Err(Error::usage(format!("{}: transition matrix must be 0/1", self.id)));
                    }
                    for s in 0..k as usize {
                        let has_succ = m[s].contains(&1);
                        let has_pred = m.iter().any(|row| row[s] == 1);
                        if !has_succ || !has_pred {
                            return Err(Error::usage(format!(
                                "{}: symbol {s} is not essential (no bi-infinite orbit uses it)",
                                self.id
                            )));
                        }
                    }
                }
            }
            PointKind::IntervalProduct => {
                if self.coordinate_dim.unwrap_or(0) == 0 {
                    return Err(Error::usage(format!("{}: coordinate_dim must be positive", self.id)));
                }
                if self.metric_kind != MetricKind::WeightedSup {
                    return Err(Error::usage(format!("{}: interval products use weighted_sup", self.id)));
                }
            }
            PointKind::ProductOfSystems => {
                if self.factors.is_empty() {
                    return Err(Error::usage(format!("{}: product without factors", self.id)));
                }
                for f in &self.factors {
                    f.validate()?;
                    if f.lattice_dim != self.lattice_dim {
                        return Err(Error::usage(format!(
                            "{}: factor {} has another lattice_dim",
                            self.id, f.id
                        )));
                    }
                }
            }
        }
        let exact = self.exact_diameter();
        if (self.diameter - exact).abs() > 1e-12 {
            return Err(Error::usage(format!(
                "{}: declared diameter {} but the metric's diameter is {exact}",
                self.id, self.diameter
            )));
        }
        Ok(())
    }

    /// Largest possible per-site distance `δ_j`, which is also the diameter of `(X, d)`.
    pub fn exact_diameter(&self) -> f64 {
        match self.point_kind {
            PointKind::Symbolic => {
                if self.alphabet_size.unwrap_or(1) > 1 {
                    1.0
                } else {
                    0.0
                }
            }
            PointKind::IntervalProduct => 1.0,
            PointKind::ProductOfSystems => self.factors.iter().map(|f| f.exact_diameter()).fold(0.0, f64::max),
        }
    }

    pub fn alphabet(&self) -> u32 {
        self.alphabet_size.unwrap_or(1)
    }

    pub fn coords(&self) -> usize {
        self.coordinate_dim.unwrap_or(1)
    }

    /// `true` when symbol `a` may be followed by symbol `b`.
    pub fn allows(&self, a: u32, b: u32) -> bool {
        match &self.transition_matrix {
            Some(m) => m[a as usize][b as usize] == 1,
            None => true,
        }
    }

    /// Leaf factors in order (a non-product system is its own single factor).
    pub fn leaves(&self) -> Vec<&SystemSpec> {
        match self.point_kind {
            PointKind::ProductOfSystems => self.factors.iter().flat_map(|f| f.leaves()).collect(),
            _ => vec![self],
        }
    }

    pub(crate) fn check_dim(&self, a: &[i64]) -> Result<()> {
        if a.len() != self.lattice_dim {
            return Err(Error::usage(format!(
                "lattice vector of dimension {} for {}-dimensional system {}",
                a.len(),
                self.lattice_dim,
                self.id
            )));
        }
        Ok(())
    }
}

/// Values of a point on its window, with a constant extension outside it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Values {
    Symbols { symbols: Vec<u32>, tail: u32 },
    Reals { reals: Vec<Vec<f64>>, tail: Vec<f64> },
    Product { factors: Vec<Point> },
}

/// A point of `X`, stored on a finite lattice box (row-major) and extended
/// by a constant tail.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub system_id: String,
    pub lo: Site,
    pub hi: Site,
    pub values: Values,
}

/// The value of a point at one site.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SiteValue<'a> {
    Symbol(u32),
    Real(&'a [f64]),
    Product(&'a [Point]),
}

impl Point {
    pub fn symbolic(s: &SystemSpec, lo: Site, hi: Site, symbols: Vec<u32>, tail: u32) -> Result<Self> {
        let p = Point {
            system_id: s.id.clone(),
            lo,
            hi,
            values: Values::Symbols { symbols, tail },
        };
        p.validate(s)?;
        Ok(p)
    }

    pub fn reals(s: &SystemSpec, lo: Site, hi: Site, reals: Vec<Vec<f64>>, tail: Vec<f64>) -> Result<Self> {
        let p = Point {
            system_id: s.id.clone(),
            lo,
            hi,
            values: Values::Reals { reals, tail },
        };
        p.validate(s)?;
        Ok(p)
    }

    pub fn product(s: &SystemSpec, factors: Vec<Point>) -> Result<Self> {
        let dim = s.lattice_dim;
        let p = Point {
            system_id: s.id.clone(),
            lo: vec![0; dim],
            hi: vec![0; dim],
            values: Values::Product { factors },
        };
        p.validate(s)?;
        Ok(p)
    }

    /// The point that is constant equal to the system's "zero" (symbol 0 or the origin of the cube).
    pub fn zero(s: &SystemSpec) -> Self {
        let dim = s.lattice_dim;
        let values = match s.point_kind {
            PointKind::Symbolic => {
                let tail = (0..s.alphabet()).find(|&a| s.allows(a, a)).unwrap_or(0);
                Values::Symbols {
                    symbols: vec![tail],
                    tail,
                }
            }
            PointKind::IntervalProduct => Values::Reals {
                reals: vec![vec![0.0; s.coords()]],
                tail: vec![0.0; s.coords()],
            },
            PointKind::ProductOfSystems => Values::Product {
                factors: s.factors.iter().map(Point::zero).collect(),
            },
        };
        Point {
            system_id: s.id.clone(),
            lo: vec![0; dim],
            hi: vec![0; dim],
            values,
        }
    }

    pub fn validate(&self, s: &SystemSpec) -> Result<()> {
        if self.system_id != s.id {
            return Err(Error::usage(format!(
                "point of {} used with system {}",
                self.system_id, s.id
            )));
        }
        if self.lo.len() != s.lattice_dim || self.hi.len() != s.lattice_dim {
            return Err(Error::usage("point window has the wrong dimension"));
        }
        if self.lo.iter().zip(&self.hi).any(|(a, b)| a > b) {
            return Err(Error::usage("point window corners are not ordered"));
        }
        let n = self.window_len();
        match (&self.values, s.point_kind) {
            (Values::Symbols { symbols, tail }, PointKind::Symbolic) => {
                if symbols.len() != n {
                    return Err(Error::usage(format!("expected {n} symbols, got {}", symbols.len())));
                }
                let k = s.alphabet();
                if symbols.iter().chain(std::iter::once(tail)).any(|&a| a >= k) {
                    return Err(Error::usage(format!("symbol outside alphabet 0..{k}")));
                }
                if s.transition_matrix.is_some() {
                    if !s.allows(*tail, *tail) {
                        return Err(Error::usage("tail symbol has no self-transition"));
                    }
                    if s.lattice_dim == 1 {
                        let word: Vec<u32> = std::iter::once(*tail)
                            .chain(symbols.iter().copied())
                            .chain(std::iter::once(*tail))
                            .collect();
                        if word.windows(2).any(|p| !s.allows(p[0], p[1])) {
                            return Err(Error::usage("point is not admissible for the subshift"));
                        }
                    }
                }
            }
            (Values::Reals { reals, tail }, PointKind::IntervalProduct) => {
                let m = s.coords();
                if reals.len() != n {
                    return Err(Error::usage(format!("expected {n} sites, got {}", reals.len())));
                }
                for v in reals.iter().chain(std::iter::once(tail)) {
                    if v.len() != m || v.iter().any(|c| !(0.0..=1.0).contains(c)) {
                        return Err(Error::usage(format!("site value {v:?} is not in [0,1]^{m}")));
                    }
                }
            }
            (Values::Product { factors }, PointKind::ProductOfSystems) => {
                if factors.len() != s.factors.len() {
                    return Err(Error::usage("product point has the wrong number of factors"));
                }
                for (p, f) in factors.iter().zip(&s.factors) {
                    p.validate(f)?;
                }
            }
            _ => return Err(Error::usage(format!("point values do not match the kind of {}", s.id))),
        }
        Ok(())
    }

    fn window_len(&self) -> usize {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(a, b)| (b - a + 1) as usize)
            .product()
    }

    fn index(&self, site: &[i64]) -> Option<usize> {
        let mut idx = 0usize;
        for ((s, a), b) in site.iter().zip(&self.lo).zip(&self.hi) {
            if s < a || s > b {
                return None;
            }
            idx = idx * (b - a + 1) as usize + (s - a) as usize;
        }
        Some(idx)
    }

    /// Value at `site`, using the tail outside the stored window.
    pub fn at(&self, site: &[i64]) -> SiteValue<'_> {
        match &self.values {
            Values::Symbols { symbols, tail } => SiteValue::Symbol(self.index(site).map_or(*tail, |i| symbols[i])),
            Values::Reals { reals, tail } => {
                SiteValue::Real(self.index(site).map_or(tail.as_slice(), |i| reals[i].as_slice()))
            }
            Values::Product { factors } => SiteValue::Product(factors),
        }
    }

    /// Symbol at `site` (panics on non-symbolic points).
    pub fn symbol(&self, site: &[i64]) -> u32 {
        match self.at(site) {
            SiteValue::Symbol(a) => a,
            _ => panic!("symbol() on a non-symbolic point"),
        }
    }

    /// Bounding box of every stored window (recursively through products).
    pub fn support(&self) -> (Site, Site) {
        match &self.values {
            Values::Product { factors } => {
                let mut it = factors.iter().map(|f| f.support());
                let first = it.next().unwrap_or((self.lo.clone(), self.hi.clone()));
                it.fold(first, |acc, b| hull(&acc, &b))
            }
            _ => (self.lo.clone(), self.hi.clone()),
        }
    }

    /// Upper bound on the base-metric distance between this point and any point
    /// that agrees with it on its stored window: `2^{-(W+1)}` where `[−W, W]^D`
    /// is the largest centred box inside the window.
    pub fn truncation_bound(&self) -> f64 {
        let (lo, hi) = self.support();
        let inner = lo.iter().zip(&hi).map(|(a, b)| (-a).min(*b)).min().unwrap_or(-1);
        if inner < 0 {
            1.0
        } else {
            0.5f64.powi(inner as i32 + 1)
        }
    }

    fn shifted(&self, a: &[i64]) -> Point {
        let values = match &self.values {
            Values::Product { factors } => Values::Product {
                factors: factors.iter().map(|f| f.shifted(a)).collect(),
            },
            v => v.clone(),
        };
        Point {
            system_id: self.system_id.clone(),
            lo: self.lo.iter().zip(a).map(|(x, y)| x - y).collect(),
            hi: self.hi.iter().zip(a).map(|(x, y)| x - y).collect(),
            values,
        }
    }
}

pub(crate) fn hull(a: &(Site, Site), b: &(Site, Site)) -> (Site, Site) {
    (
        a.0.iter().zip(&b.0).map(|(x, y)| *x.min(y)).collect(),
        a.1.iter().zip(&b.1).map(|(x, y)| *x.max(y)).collect(),
    )
}

/// Per-site distance `δ_j(x_j, y_j)`.
pub fn site_distance(x: &Point, y: &Point, site: &[i64]) -> f64 {
    match (x.at(site), y.at(site)) {
        (SiteValue::Symbol(a), SiteValue::Symbol(b)) => {
            if a == b {
                0.0
            } else {
                1.0
            }
        }
        (SiteValue::Real(a), SiteValue::Real(b)) => a.iter().zip(b).map(|(u, v)| (u - v).abs()).fold(0.0, f64::max),
        (SiteValue::Product(fx), SiteValue::Product(fy)) => fx
            .iter()
            .zip(fy)
            .map(|(p, q)| site_distance(p, q, site))
            .fold(0.0, f64::max),
        _ => f64::NAN,
    }
}

fn check_pair(s: &SystemSpec, x: &Point, y: &Point) -> Result<()> {
    if x.system_id != s.id || y.system_id != s.id {
        return Err(Error::usage(format!(
            "points of {} and {} measured in system {}",
            x.system_id, y.system_id, s.id
        )));
    }
    Ok(())
}

/// Sup over the sites outside `[lo, hi]` of `2^{-weight(j)}`, given that the
/// tails of both points agree there. `weight` is `|j|_∞` for the base metric
/// and `dist(j, w)` for orbit metrics.
fn outside_weight(lo: &[i64], hi: &[i64], w: &Window) -> i64 {
    // Any window site outside the box is itself an outside site at distance 0.
    if w.sites()
        .iter()
        .any(|a| a.iter().zip(lo.iter().zip(hi)).any(|(c, (l, h))| c < l || c > h))
    {
        return 0;
    }
    w.sites()
        .iter()
        .map(|a| {
            a.iter()
                .zip(lo.iter().zip(hi))
                .map(|(c, (l, h))| (c - l + 1).min(h - c + 1))
                .min()
                .unwrap_or(0)
        })
        .min()
        .unwrap_or(0)
}

fn tail_distance(x: &Point, y: &Point, far: &[i64]) -> f64 {
    site_distance(x, y, far)
}

fn weighted_sup(x: &Point, y: &Point, w: &Window) -> f64 {
    let (lo, hi) = hull(&x.support(), &y.support());
    let mut best = 0.0f64;
    for site in crate::lattice::box_sites(&lo, &hi) {
        let d = site_distance(x, y, &site);
        if d > 0.0 {
            best = best.max(d * 0.5f64.powi(w.distance(&site) as i32));
        }
    }
    // A site strictly outside the hull reads both tails.
    let far: Site = hi.iter().map(|h| h + 1).collect();
    let dt = tail_distance(x, y, &far);
    if dt > 0.0 {
        best = best.max(dt * 0.5f64.powi(outside_weight(&lo, &hi, w) as i32));
    }
    best
}

/// `d(x, y) = sup_j 2^{-|j|_∞} δ_j(x_j, y_j)`.
pub fn base_metric(s: &SystemSpec, x: &Point, y: &Point) -> Result<f64> {
    check_pair(s, x, y)?;
    Ok(weighted_sup(x, y, &Window::centered(s.lattice_dim, 0)))
}

/// `(T^a x)_n = x_{n+a}`.
pub fn act(s: &SystemSpec, a: &[i64], x: &Point) -> Result<Point> {
    s.check_dim(a)?;
    if x.system_id != s.id {
        return Err(Error::usage(format!("point of {} acted on by {}", x.system_id, s.id)));
    }
    Ok(x.shifted(a))
}

/// `d_w(x, y) = sup_{a∈w} d(T^a x, T^a y)`, evaluated through the site weights
/// `2^{-dist(j, w)}`.
pub fn orbit_metric(s: &SystemSpec, w: &Window, x: &Point, y: &Point) -> Result<f64> {
    check_pair(s, x, y)?;
    if w.is_empty() {
        return Err(Error::usage("orbit metric over an empty window"));
    }
    s.check_dim(&w.hull().0)?;
    Ok(weighted_sup(x, y, w))
}

/// `d_w` evaluated literally as a maximum of base metrics over shifted pairs.
pub fn orbit_metric_by_shifts(s: &SystemSpec, w: &Window, x: &Point, y: &Point) -> Result<f64> {
    if w.is_empty() {
        return Err(Error::usage("orbit metric over an empty window"));
    }
    let mut best = 0.0f64;
    for a in w.sites() {
        best = best.max(base_metric(s, &act(s, &a, x)?, &act(s, &a, y)?)?);
    }
    Ok(best)
}

/// Norm of the closest site where two points can differ, for diagnostics.
pub fn first_difference(x: &Point, y: &Point) -> Option<i64> {
    let (lo, hi) = hull(&x.support(), &y.support());
    crate::lattice::box_sites(&lo, &hi)
        .into_iter()
        .filter(|j| site_distance(x, y, j) > 0.0)
        .map(|j| sup_norm(&j))
        .min()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two() -> SystemSpec {
        SystemSpec::full_shift("fs2", 2, 1)
    }

    fn spike(s: &SystemSpec, at: i64) -> Point {
        Point::symbolic(s, vec![at], vec![at], vec![1], 0).unwrap()
    }

    #[test]
    fn base_metric_examples() {
        let s = two();
        let x = Point::zero(&s);
        assert_eq!(base_metric(&s, &x, &x).unwrap(), 0.0);
        assert_eq!(base_metric(&s, &x, &spike(&s, 3)).unwrap(), 0.125);

        let h = SystemSpec::interval_product("hc", 1, 1);
        let y = Point::reals(&h, vec![0], vec![0], vec![vec![0.5]], vec![0.0]).unwrap();
        assert_eq!(base_metric(&h, &Point::zero(&h), &y).unwrap(), 0.5);
    }

    #[test]
    fn act_examples() {
        let s = two();
        let x = spike(&s, 0);
        assert_eq!(act(&s, &[0], &x).unwrap(), x);
        let back = act(&s, &[-1], &act(&s, &[1], &x).unwrap()).unwrap();
        assert_eq!(back.symbol(&[0]), 1);
        let moved = act(&s, &[2], &x).unwrap();
        assert_eq!(moved.symbol(&[-2]), 1);
        assert_eq!(moved.symbol(&[0]), 0);
        assert!(act(&s, &[1, 1], &x).is_err());
    }

    #[test]
    fn orbit_metric_examples() {
        let s = two();
        let x = Point::zero(&s);
        let y = spike(&s, 3);
        let single = Window::centered(1, 0);
        assert_eq!(
            orbit_metric(&s, &single, &x, &y).unwrap(),
            base_metric(&s, &x, &y).unwrap()
        );
        let w = Window::cube(1, 4).unwrap();
        assert_eq!(orbit_metric(&s, &w, &x, &y).unwrap(), 1.0);
        assert_eq!(orbit_metric(&s, &w, &y, &y).unwrap(), 0.0);
    }

    #[test]
    fn tails_are_compared() {
        let s = two();
        let x = Point::symbolic(&s, vec![-1], vec![1], vec![0, 0, 0], 0).unwrap();
        let y = Point::symbolic(&s, vec![-1], vec![1], vec![0, 0, 0], 1).unwrap();
        assert_eq!(base_metric(&s, &x, &y).unwrap(), 0.25);
        assert_eq!(orbit_metric(&s, &Window::cube(1, 2).unwrap(), &x, &y).unwrap(), 0.5);
        assert_eq!(
            orbit_metric_by_shifts(&s, &Window::cube(1, 2).unwrap(), &x, &y).unwrap(),
            0.5
        );
    }

    #[test]
    fn mismatched_ids_are_usage_errors() {
        let s = two();
        let other = SystemSpec::full_shift("fs3", 3, 1);
        let x = Point::zero(&s);
        let y = Point::zero(&other);
        assert!(matches!(base_metric(&s, &x, &y), Err(Error::Usage(_))));
    }

    #[test]
    fn validation() {
        assert!(SystemSpec::full_shift("a", 2, 1).validate().is_ok());
        let mut bad = SystemSpec::full_shift("a", 2, 1);
        bad.diameter = 0.5;
        assert!(bad.validate().is_err());
        let gm = SystemSpec::subshift("gm", vec![vec![1, 1], vec![1, 0]]);
        assert!(gm.validate().is_ok());
        assert!(Point::symbolic(&gm, vec![0], vec![1], vec![1, 1], 0).is_err());
        assert!(Point::symbolic(&gm, vec![0], vec![1], vec![1, 0], 0).is_ok());
    }

    #[test]
    fn truncation_bound() {
        let s = two();
        let x = Point::symbolic(&s, vec![-3], vec![3], vec![0; 7], 0).unwrap();
        assert_eq!(x.truncation_bound(), 1.0 / 16.0);
    }
}
