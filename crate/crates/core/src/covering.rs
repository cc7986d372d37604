//! Minimal `(d_w, ε)`-spanning cardinalities `#(K, d_w, ε)`.
//!
//! Closed `d_w`-balls of radius `ε` are products over sites of per-site
//! balls with radius `ρ_j = ε · 2^{dist(j, w)}`. Only the sites with
//! `2^{-dist(j, w)} > ε` constrain anything, so on cylinder-type sets the
//! minimal count factorises:
//!
//! * symbolic full shifts: the balls partition `X` into cylinders, and the
//!   count is the number of distinct restrictions of `K` to the relevant sites;
//! * one-dimensional subshifts of finite type: the same restriction count,
//!   done by a transfer-matrix sweep that quantifies existentially over the
//!   sites in between;
//! * interval products: `∏_j ∏_c ⌈len_{j,c} / 2ρ_j⌉`, exact because a grid of
//!   `⌈len/2ρ⌉` points per coordinate is `2ρ`-separated.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{box_sites, Site, Window};
use crate::system::{orbit_metric, Point, PointKind, SiteValue, SystemSpec, Values};

/// Allowed values of one leaf factor at one site.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SiteConstraint {
    Free,
    /// Bitmask of allowed symbols.
    Symbols(u64),
    /// Allowed box `∏_c [lo_c, hi_c]` inside `[0,1]^m`.
    Interval(Vec<(f64, f64)>),
}

impl SiteConstraint {
    fn symbol_mask(&self, alphabet: u32) -> u64 {
        let full = if alphabet >= 64 {
            u64::MAX
        } else {
            (1u64 << alphabet) - 1
        };
        match self {
            SiteConstraint::Symbols(m) => m & full,
            _ => full,
        }
    }

    fn intervals(&self, coords: usize) -> Vec<(f64, f64)> {
        match self {
            SiteConstraint::Interval(v) => v.clone(),
            _ => vec![(0.0, 1.0); coords],
        }
    }

    pub fn pin_symbol(a: u32) -> Self {
        SiteConstraint::Symbols(1u64 << a)
    }

    /// `[x - r, x + r] ∩ [0, 1]` per coordinate.
    pub fn around(x: &[f64], r: f64) -> Self {
        SiteConstraint::Interval(x.iter().map(|c| ((c - r).max(0.0), (c + r).min(1.0))).collect())
    }
}

/// Constraints for one leaf factor: explicit sites plus a constraint for every other site.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FactorConstraint {
    pub sites: BTreeMap<Site, SiteConstraint>,
    pub tail: SiteConstraint,
}

impl FactorConstraint {
    pub fn free() -> Self {
        FactorConstraint {
            sites: BTreeMap::new(),
            tail: SiteConstraint::Free,
        }
    }

    pub fn at(&self, site: &[i64]) -> &SiteConstraint {
        self.sites.get(site).unwrap_or(&self.tail)
    }

    fn translate(&self, t: &[i64]) -> Self {
        FactorConstraint {
            sites: self
                .sites
                .iter()
                .map(|(j, c)| (j.iter().zip(t).map(|(a, b)| a - b).collect(), c.clone()))
                .collect(),
            tail: self.tail.clone(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PointSetKind {
    WholeSpace,
    ExplicitCloud,
    CylinderEnumeration,
}

/// A subset `K ⊆ X`: the whole space, a finite cloud, or a cylinder-type set
/// given by per-site constraints on each leaf factor.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointSet {
    pub system_id: String,
    pub kind: PointSetKind,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub factors: Vec<FactorConstraint>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<Point>,
}

impl PointSet {
    pub fn whole(s: &SystemSpec) -> Self {
        PointSet {
            system_id: s.id.clone(),
            kind: PointSetKind::WholeSpace,
            factors: s.leaves().iter().map(|_| FactorConstraint::free()).collect(),
            points: Vec::new(),
        }
    }

    pub fn cylinder(s: &SystemSpec, factors: Vec<FactorConstraint>) -> Result<Self> {
        if factors.len() != s.leaves().len() {
            return Err(Error::usage(format!(
                "{} leaf factors need {} constraint sets, got {}",
                s.id,
                s.leaves().len(),
                factors.len()
            )));
        }
        Ok(PointSet {
            system_id: s.id.clone(),
            kind: PointSetKind::CylinderEnumeration,
            factors,
            points: Vec::new(),
        })
    }

    pub fn cloud(s: &SystemSpec, points: Vec<Point>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::usage("point cloud must be nonempty"));
        }
        for p in &points {
            p.validate(s)?;
        }
        Ok(PointSet {
            system_id: s.id.clone(),
            kind: PointSetKind::ExplicitCloud,
            factors: Vec::new(),
            points,
        })
    }

    /// The cylinder of all points agreeing with `x` on `sites`.
    pub fn pinned(s: &SystemSpec, x: &Point, sites: &[Site]) -> Result<Self> {
        let leaves = leaf_points(x);
        let mut factors = Vec::new();
        for p in leaves {
            let mut fc = FactorConstraint::free();
            for j in sites {
                let c = match p.at(j) {
                    SiteValue::Symbol(a) => SiteConstraint::pin_symbol(a),
                    SiteValue::Real(v) => SiteConstraint::around(v, 0.0),
                    SiteValue::Product(_) => unreachable!("leaf points are not products"),
                };
                fc.sites.insert(j.clone(), c);
            }
            factors.push(fc);
        }
        Self::cylinder(s, factors)
    }

    fn check(&self, s: &SystemSpec) -> Result<()> {
        if self.system_id != s.id {
            return Err(Error::usage(format!(
                "point set of {} used with {}",
                self.system_id, s.id
            )));
        }
        Ok(())
    }

    /// `T^t K = {T^t y : y ∈ K}`.
    pub fn translate(&self, s: &SystemSpec, t: &[i64]) -> Result<Self> {
        s.check_dim(t)?;
        let mut out = self.clone();
        out.factors = self.factors.iter().map(|f| f.translate(t)).collect();
        out.points = self
            .points
            .iter()
            .map(|p| crate::system::act(s, t, p))
            .collect::<Result<_>>()?;
        Ok(out)
    }

    /// Membership test for cylinder-type sets (clouds compare by equality).
    pub fn contains(&self, s: &SystemSpec, x: &Point) -> bool {
        if self.kind == PointSetKind::ExplicitCloud {
            return self.points.iter().any(|p| p == x);
        }
        let (lo, hi) = x.support();
        let mut probe: BTreeSet<Site> = box_sites(&lo, &hi).into_iter().collect();
        for f in &self.factors {
            probe.extend(f.sites.keys().cloned());
        }
        probe.insert(hi.iter().map(|h| h + 1).collect());
        let leaves = leaf_points(x);
        s.leaves()
            .iter()
            .zip(&self.factors)
            .zip(leaves)
            .all(|((_, fc), p)| probe.iter().all(|j| satisfies(fc.at(j), p.at(j))))
    }

    /// Sites carrying an explicit constraint on some factor.
    pub fn constrained_sites(&self) -> BTreeSet<Site> {
        self.factors.iter().flat_map(|f| f.sites.keys().cloned()).collect()
    }
}

fn satisfies(c: &SiteConstraint, v: SiteValue<'_>) -> bool {
    match (c, v) {
        (SiteConstraint::Free, _) => true,
        (SiteConstraint::Symbols(m), SiteValue::Symbol(a)) => m >> a & 1 == 1,
        (SiteConstraint::Interval(iv), SiteValue::Real(x)) => iv
            .iter()
            .zip(x)
            .all(|((lo, hi), c)| *lo - 1e-12 <= *c && *c <= *hi + 1e-12),
        _ => false,
    }
}

/// The leaf-factor components of a point, in the order of `SystemSpec::leaves`.
pub fn leaf_points(x: &Point) -> Vec<&Point> {
    match &x.values {
        Values::Product { factors } => factors.iter().flat_map(leaf_points).collect(),
        _ => vec![x],
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NetMethod {
    ExactOracle,
    GreedySpan,
    GreedySeparated,
    GridBracket,
}

impl NetMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            NetMethod::ExactOracle => "exact_oracle",
            NetMethod::GreedySpan => "greedy_span",
            NetMethod::GreedySeparated => "greedy_separated",
            NetMethod::GridBracket => "grid_bracket",
        }
    }
}

mod decimal {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_str_radix(10))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        BigUint::parse_bytes(s.as_bytes(), 10).ok_or_else(|| serde::de::Error::custom("not a decimal integer"))
    }
}

/// A spanning or separated set, with a bracket on the true minimal count.
///
/// `lower_bound ≤ #(K, d_w, ε) ≤ upper_bound`, where for enumeration-based
/// methods `K` is the enumerated set. Centers are listed for the greedy
/// methods; the exact oracle only counts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NetResult {
    pub epsilon: f64,
    pub window: Window,
    pub method: NetMethod,
    pub centers: Vec<Point>,
    pub centers_listed: bool,
    #[serde(with = "decimal")]
    pub cardinality: BigUint,
    #[serde(with = "decimal")]
    pub lower_bound: BigUint,
    #[serde(with = "decimal")]
    pub upper_bound: BigUint,
}

impl NetResult {
    pub fn log_count(&self) -> f64 {
        ln_big(&self.cardinality)
    }

    pub fn log_bracket(&self) -> (f64, f64) {
        (ln_big(&self.lower_bound), ln_big(&self.upper_bound))
    }

    /// CSV row `(epsilon, window, method, lower, upper)`.
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{}",
            self.epsilon,
            window_label(&self.window),
            self.method.as_str(),
            self.lower_bound,
            self.upper_bound
        )
    }

    pub const CSV_HEADER: &'static str = "epsilon,window,method,lower,upper";
}

pub fn window_label(w: &Window) -> String {
    match w {
        Window::Box { lo, hi } => {
            let f = |v: &Site| v.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ");
            format!("[{}..{}]", f(lo), f(hi))
        }
        Window::Explicit { sites } => format!("explicit({} sites)", sites.len()),
    }
}

/// Natural logarithm of an arbitrarily large integer (`-inf` for zero).
pub fn ln_big(n: &BigUint) -> f64 {
    if n.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = n.bits();
    if bits <= 1000 {
        return n.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top = (n >> shift).to_f64().unwrap_or(f64::INFINITY);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Largest `R ≥ 0` with `2^{-R} > ε`, or `None` when `ε ≥ 1`.
pub fn relevant_radius(eps: f64) -> Option<i64> {
    if eps >= 1.0 {
        return None;
    }
    let mut r = 0i64;
    while 0.5f64.powi(r as i32 + 1) > eps {
        r += 1;
    }
    Some(r)
}

/// Sites `j` with `2^{-dist(j, w)} > ε`; the only sites a `(d_w, ε)`-ball constrains.
pub fn relevant_sites(w: &Window, eps: f64) -> Vec<Site> {
    match relevant_radius(eps) {
        None => Vec::new(),
        Some(r) => w.dilate(r),
    }
}

fn check_eps(eps: f64) -> Result<()> {
    if eps.is_nan() || eps <= 0.0 || !eps.is_finite() {
        return Err(Error::usage(format!("epsilon must be positive and finite, got {eps}")));
    }
    Ok(())
}

fn ceil_ratio(len: f64, diam: f64) -> u64 {
    if len <= 0.0 {
        return 1;
    }
    let q = len / diam;
    let r = q.round();
    let c = if (q - r).abs() < 1e-9 { r } else { q.ceil() };
    (c as u64).max(1)
}

/// Per-site count of an interval constraint at ball radius `rho` on the continuum.
fn interval_site_count(iv: &[(f64, f64)], rho: f64) -> Option<BigUint> {
    let mut n = BigUint::one();
    for (lo, hi) in iv {
        if lo > hi {
            return None;
        }
        n *= ceil_ratio(hi - lo, 2.0 * rho);
    }
    Some(n)
}

/// Per-site count on the grid `hZ ∩ [lo, hi]` (snapped to `lo` when it has no grid point).
fn grid_site_count(iv: &[(f64, f64)], rho: f64, h: f64) -> Option<BigUint> {
    let mut n = BigUint::one();
    for (lo, hi) in iv {
        if lo > hi {
            return None;
        }
        let first = (lo / h - 1e-9).ceil() as i64;
        let last = (hi / h + 1e-9).floor() as i64;
        let pts = (last - first + 1).max(1) as u64;
        let per_ball = (2.0 * rho / h + 1e-9).floor() as u64 + 1;
        n *= pts.div_ceil(per_ball);
    }
    Some(n)
}

#[derive(Clone, Copy)]
enum IntervalRule {
    Continuum,
    Grid(f64),
}

fn leaf_count(
    leaf: &SystemSpec,
    fc: &FactorConstraint,
    w: &Window,
    eps: f64,
    relevant: &[Site],
    rule: IntervalRule,
) -> BigUint {
    match leaf.point_kind {
        PointKind::Symbolic => {
            if leaf.transition_matrix.is_some() {
                return sft_count(leaf, fc, relevant);
            }
            let k = leaf.alphabet();
            // Emptiness of an explicitly constrained site outside the relevant set.
            if fc.sites.values().any(|c| c.symbol_mask(k) == 0) || fc.tail.symbol_mask(k) == 0 {
                return BigUint::zero();
            }
            let mut n = BigUint::one();
            for j in relevant {
                n *= fc.at(j).symbol_mask(k).count_ones();
            }
            n
        }
        PointKind::IntervalProduct => {
            let m = leaf.coords();
            if fc
                .sites
                .values()
                .chain(std::iter::once(&fc.tail))
                .any(|c| c.intervals(m).iter().any(|(lo, hi)| lo > hi))
            {
                return BigUint::zero();
            }
            let mut n = BigUint::one();
            for j in relevant {
                let rho = eps * 2f64.powi(w.distance(j) as i32);
                let iv = fc.at(j).intervals(m);
                let c = match rule {
                    IntervalRule::Continuum => interval_site_count(&iv, rho),
                    IntervalRule::Grid(h) => grid_site_count(&iv, rho, h),
                };
                n *= c.unwrap_or_default();
            }
            n
        }
        PointKind::ProductOfSystems => unreachable!("leaves are never products"),
    }
}

/// Symbols `s ∈ T` admitting an infinite admissible path inside `T` in the given direction.
fn extendable(leaf: &SystemSpec, allowed: u64, forward: bool) -> u64 {
    let k = leaf.alphabet();
    let mut e = allowed;
    loop {
        let mut next = 0u64;
        for s in 0..k {
            if e >> s & 1 == 0 {
                continue;
            }
            let ok = (0..k).any(|t| e >> t & 1 == 1 && if forward { leaf.allows(s, t) } else { leaf.allows(t, s) });
            if ok {
                next |= 1 << s;
            }
        }
        if next == e {
            return e;
        }
        e = next;
    }
}

fn successors(leaf: &SystemSpec, set: u64) -> u64 {
    let k = leaf.alphabet();
    let mut out = 0u64;
    for s in 0..k {
        if set >> s & 1 == 1 {
            for t in 0..k {
                if leaf.allows(s, t) {
                    out |= 1 << t;
                }
            }
        }
    }
    out
}

/// Number of distinct restrictions to `relevant` of the admissible
/// configurations satisfying `fc`, for a one-dimensional subshift of finite type.
fn sft_count(leaf: &SystemSpec, fc: &FactorConstraint, relevant: &[Site]) -> BigUint {
    let k = leaf.alphabet();
    let tail = fc.tail.symbol_mask(k);
    let left = extendable(leaf, tail, false);
    let right = extendable(leaf, tail, true);
    let marked: BTreeSet<i64> = relevant.iter().map(|j| j[0]).collect();
    let span: Vec<i64> = marked.iter().copied().chain(fc.sites.keys().map(|j| j[0])).collect();
    let (Some(&lo), Some(&hi)) = (span.iter().min(), span.iter().max()) else {
        // Nothing pinned and nothing counted: one class iff a bi-infinite path exists in the tail set.
        return if left & right != 0 && extendable(leaf, left & right, true) != 0 {
            BigUint::one()
        } else {
            BigUint::zero()
        };
    };
    let mut states: BTreeMap<u64, BigUint> = BTreeMap::new();
    states.insert(left, BigUint::one());
    for j in lo..=hi {
        let allowed = fc.at(&[j]).symbol_mask(k);
        let mut next: BTreeMap<u64, BigUint> = BTreeMap::new();
        for (set, count) in states {
            let reach = successors(leaf, set) & allowed;
            if reach == 0 {
                continue;
            }
            if marked.contains(&j) {
                for a in 0..k {
                    if reach >> a & 1 == 1 {
                        *next.entry(1u64 << a).or_default() += &count;
                    }
                }
            } else {
                *next.entry(reach).or_default() += count;
            }
        }
        states = next;
    }
    states
        .into_iter()
        .filter(|(set, _)| successors(leaf, *set) & right != 0)
        .map(|(_, c)| c)
        .sum()
}

fn product_count(s: &SystemSpec, k: &PointSet, w: &Window, eps: f64, rule: IntervalRule) -> BigUint {
    let relevant = relevant_sites(w, eps);
    s.leaves()
        .iter()
        .zip(&k.factors)
        .map(|(leaf, fc)| leaf_count(leaf, fc, w, eps, &relevant, rule))
        .product()
}

fn oracle_eligible(s: &SystemSpec, k: &PointSet, w: &Window, eps: f64) -> Result<()> {
    k.check(s)?;
    check_eps(eps)?;
    if w.is_empty() {
        return Err(Error::usage("empty window"));
    }
    s.check_dim(&w.hull().0)?;
    if k.kind == PointSetKind::ExplicitCloud {
        return Err(Error::Unsupported(
            "explicit point clouds have no exact covering oracle; use greedy_spanning / greedy_separated".into(),
        ));
    }
    Ok(())
}

/// Exact `#(K, d_w, ε)` for whole spaces and cylinder-type sets.
pub fn exact_covering_number(s: &SystemSpec, k: &PointSet, w: &Window, eps: f64) -> Result<NetResult> {
    oracle_eligible(s, k, w, eps)?;
    let n = product_count(s, k, w, eps, IntervalRule::Continuum);
    Ok(NetResult {
        epsilon: eps,
        window: w.clone(),
        method: NetMethod::ExactOracle,
        centers: Vec::new(),
        centers_listed: false,
        lower_bound: n.clone(),
        upper_bound: n.clone(),
        cardinality: n,
    })
}

/// Covering count of the `h`-grid discretisation of `K`, bracketed by
/// `[#(K_h, ε+h), #(K_h, ε−h)]`, which also brackets the continuum count.
pub fn grid_covering_number(s: &SystemSpec, k: &PointSet, w: &Window, eps: f64, h: f64) -> Result<NetResult> {
    oracle_eligible(s, k, w, eps)?;
    if h.is_nan() || h <= 0.0 || h >= eps {
        return Err(Error::usage(format!(
            "grid step {h} must satisfy 0 < h < epsilon = {eps}"
        )));
    }
    let at = |e: f64| product_count(s, k, w, e, IntervalRule::Grid(h));
    let n = at(eps);
    Ok(NetResult {
        epsilon: eps,
        window: w.clone(),
        method: NetMethod::GridBracket,
        centers: Vec::new(),
        centers_listed: false,
        cardinality: n,
        lower_bound: at(eps + h),
        upper_bound: at(eps - h),
    })
}

/// Hard cap on enumerated point sets.
pub const MAX_ENUMERATION: usize = 1 << 16;

/// Representatives of `K` on the lattice box `[lo, hi]`: every combination of
/// allowed site values (symbols, or multiples of `h` inside each interval),
/// extended by a tail satisfying the tail constraint.
pub fn enumerate(s: &SystemSpec, k: &PointSet, lo: &[i64], hi: &[i64], h: Option<f64>) -> Result<Vec<Point>> {
    k.check(s)?;
    if k.kind == PointSetKind::ExplicitCloud {
        return Ok(k.points.clone());
    }
    let sites = box_sites(lo, hi);
    let mut per_leaf: Vec<Vec<Point>> = Vec::new();
    for (leaf, fc) in s.leaves().iter().zip(&k.factors) {
        per_leaf.push(enumerate_leaf(leaf, fc, lo, hi, &sites, h)?);
    }
    let total: usize = per_leaf
        .iter()
        .map(|v| v.len().max(1))
        .try_fold(1usize, |a, b| a.checked_mul(b))
        .unwrap_or(usize::MAX);
    if total > MAX_ENUMERATION {
        return Err(Error::usage(format!(
            "enumeration of {total} points exceeds the limit {MAX_ENUMERATION}"
        )));
    }
    if s.point_kind != PointKind::ProductOfSystems {
        return Ok(per_leaf.pop().unwrap_or_default());
    }
    let mut combos: Vec<Vec<Point>> = vec![Vec::new()];
    for options in &per_leaf {
        let mut next = Vec::new();
        for prefix in &combos {
            for p in options {
                let mut c = prefix.clone();
                c.push(p.clone());
                next.push(c);
            }
        }
        combos = next;
    }
    combos.into_iter().map(|leaves| assemble(s, leaves)).collect()
}

pub(crate) fn assemble(s: &SystemSpec, leaves: Vec<Point>) -> Result<Point> {
    fn build(s: &SystemSpec, it: &mut std::vec::IntoIter<Point>) -> Point {
        match s.point_kind {
            PointKind::ProductOfSystems => Point {
                system_id: s.id.clone(),
                lo: vec![0; s.lattice_dim],
                hi: vec![0; s.lattice_dim],
                values: Values::Product {
                    factors: s.factors.iter().map(|f| build(f, it)).collect(),
                },
            },
            _ => it.next().expect("one leaf point per leaf factor"),
        }
    }
    let mut it = leaves.into_iter();
    let p = build(s, &mut it);
    p.validate(s)?;
    Ok(p)
}

fn grid_values(lo: f64, hi: f64, h: f64) -> Vec<f64> {
    let first = (lo / h - 1e-9).ceil() as i64;
    let last = (hi / h + 1e-9).floor() as i64;
    if first > last {
        return vec![lo];
    }
    (first..=last).map(|i| (i as f64 * h).clamp(0.0, 1.0)).collect()
}

fn enumerate_leaf(
    leaf: &SystemSpec,
    fc: &FactorConstraint,
    lo: &[i64],
    hi: &[i64],
    sites: &[Site],
    h: Option<f64>,
) -> Result<Vec<Point>> {
    match leaf.point_kind {
        PointKind::Symbolic => {
            let k = leaf.alphabet();
            let tail_mask = fc.tail.symbol_mask(k);
            let Some(tail) = (0..k).find(|&a| tail_mask >> a & 1 == 1 && leaf.allows(a, a)) else {
                return Ok(Vec::new());
            };
            let mut words: Vec<Vec<u32>> = vec![Vec::new()];
            for j in sites {
                let mask = fc.at(j).symbol_mask(k);
                let mut next = Vec::new();
                for w in &words {
                    for a in 0..k {
                        if mask >> a & 1 == 1 {
                            let mut v = w.clone();
                            v.push(a);
                            next.push(v);
                        }
                    }
                }
                if next.len() > MAX_ENUMERATION {
                    return Err(Error::usage("symbolic enumeration too large"));
                }
                words = next;
            }
            Ok(words
                .into_iter()
                .filter_map(|w| Point::symbolic(leaf, lo.to_vec(), hi.to_vec(), w, tail).ok())
                .collect())
        }
        PointKind::IntervalProduct => {
            let h = h.ok_or_else(|| Error::usage("enumerating an interval product needs a grid step"))?;
            let m = leaf.coords();
            let tail: Vec<f64> = fc.tail.intervals(m).iter().map(|(a, _)| *a).collect();
            let mut vals: Vec<Vec<Vec<f64>>> = vec![Vec::new()];
            for j in sites {
                let iv = fc.at(j).intervals(m);
                let mut site_opts: Vec<Vec<f64>> = vec![Vec::new()];
                for (a, b) in &iv {
                    let mut next = Vec::new();
                    for pre in &site_opts {
                        for g in grid_values(*a, *b, h) {
                            let mut v = pre.clone();
                            v.push(g);
                            next.push(v);
                        }
                    }
                    site_opts = next;
                }
                let mut next = Vec::new();
                for pre in &vals {
                    for o in &site_opts {
                        let mut v = pre.clone();
                        v.push(o.clone());
                        next.push(v);
                    }
                }
                if next.len() > MAX_ENUMERATION {
                    return Err(Error::usage("grid enumeration too large"));
                }
                vals = next;
            }
            vals.into_iter()
                .map(|v| Point::reals(leaf, lo.to_vec(), hi.to_vec(), v, tail.clone()))
                .collect()
        }
        PointKind::ProductOfSystems => unreachable!("leaves are never products"),
    }
}

/// Default enumeration box: the hull of the relevant sites and the constrained sites.
fn default_box(s: &SystemSpec, k: &PointSet, w: &Window, eps: f64) -> (Site, Site) {
    let mut sites: Vec<Site> = relevant_sites(w, eps);
    sites.extend(k.constrained_sites());
    if sites.is_empty() {
        sites.push(vec![0; s.lattice_dim]);
    }
    let dim = s.lattice_dim;
    let mut lo = vec![i64::MAX; dim];
    let mut hi = vec![i64::MIN; dim];
    for j in &sites {
        for i in 0..dim {
            lo[i] = lo[i].min(j[i]);
            hi[i] = hi[i].max(j[i]);
        }
    }
    (lo, hi)
}

/// How to turn a non-cloud point set into finitely many points.
#[derive(Clone, Debug, Default)]
pub struct Enumeration {
    /// Lattice box to enumerate on; defaults to the relevant-site hull.
    pub region: Option<(Site, Site)>,
    /// Grid step for interval coordinates.
    pub grid_step: Option<f64>,
}

fn materialize(s: &SystemSpec, k: &PointSet, w: &Window, eps: f64, how: &Enumeration) -> Result<Vec<Point>> {
    k.check(s)?;
    check_eps(eps)?;
    if w.is_empty() {
        return Err(Error::usage("empty window"));
    }
    let (lo, hi) = how.region.clone().unwrap_or_else(|| default_box(s, k, w, eps));
    let pts = enumerate(s, k, &lo, &hi, how.grid_step)?;
    if pts.is_empty() {
        return Err(Error::usage("point set is empty"));
    }
    Ok(pts)
}

fn separated_indices(s: &SystemSpec, pts: &[Point], w: &Window, eps: f64) -> Result<Vec<usize>> {
    let mut chosen: Vec<usize> = Vec::new();
    for i in 0..pts.len() {
        let mut far = true;
        for &c in &chosen {
            if orbit_metric(s, w, &pts[i], &pts[c])? <= eps {
                far = false;
                break;
            }
        }
        if far {
            chosen.push(i);
        }
    }
    Ok(chosen)
}

/// Greedy `(d_w, ε)`-spanning set: repeatedly take the first uncovered point
/// in enumeration order as a new center.
pub fn greedy_spanning(s: &SystemSpec, k: &PointSet, w: &Window, eps: f64, how: &Enumeration) -> Result<NetResult> {
    let pts = materialize(s, k, w, eps, how)?;
    let mut covered = vec![false; pts.len()];
    let mut centers = Vec::new();
    for i in 0..pts.len() {
        if covered[i] {
            continue;
        }
        centers.push(pts[i].clone());
        for j in i..pts.len() {
            if !covered[j] && orbit_metric(s, w, &pts[i], &pts[j])? <= eps {
                covered[j] = true;
            }
        }
    }
    let lower = separated_indices(s, &pts, w, 2.0 * eps)?.len();
    let n = BigUint::from(centers.len());
    Ok(NetResult {
        epsilon: eps,
        window: w.clone(),
        method: NetMethod::GreedySpan,
        centers,
        centers_listed: true,
        lower_bound: BigUint::from(lower),
        upper_bound: n.clone(),
        cardinality: n,
    })
}

/// Maximal `ε`-separated subset (pairwise `d_w > ε`), chosen greedily in
/// enumeration order. Being maximal it is also `ε`-spanning.
pub fn greedy_separated(s: &SystemSpec, k: &PointSet, w: &Window, eps: f64, how: &Enumeration) -> Result<NetResult> {
    let pts = materialize(s, k, w, eps, how)?;
    let chosen = separated_indices(s, &pts, w, eps)?;
    let lower = separated_indices(s, &pts, w, 2.0 * eps)?.len();
    let n = BigUint::from(chosen.len());
    Ok(NetResult {
        epsilon: eps,
        window: w.clone(),
        method: NetMethod::GreedySeparated,
        centers: chosen.into_iter().map(|i| pts[i].clone()).collect(),
        centers_listed: true,
        lower_bound: BigUint::from(lower),
        upper_bound: n.clone(),
        cardinality: n,
    })
}

/// Both sides of a product-type covering inequality.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub name: String,
    pub epsilon: f64,
    #[serde(with = "decimal")]
    pub lhs: BigUint,
    #[serde(with = "decimal")]
    pub rhs: BigUint,
    /// The individual factors (or summands) of the right-hand side.
    pub terms: Vec<String>,
    pub holds: bool,
}

impl BoundReport {
    fn new(name: &str, eps: f64, lhs: BigUint, rhs: BigUint, terms: Vec<BigUint>) -> Self {
        BoundReport {
            name: name.to_string(),
            epsilon: eps,
            holds: lhs <= rhs,
            lhs,
            rhs,
            terms: terms.iter().map(|t| t.to_string()).collect(),
        }
    }

    pub fn into_result(self) -> Result<Self> {
        if self.holds {
            Ok(self)
        } else {
            Err(Error::Property(format!(
                "{} failed at ε = {}: {} > {}",
                self.name, self.epsilon, self.lhs, self.rhs
            )))
        }
    }
}

/// `#(F, d_n, ε) ≤ ∏_i #(T^{t_i} F, d_{t_{i+1} − t_i}, ε/2)` for cut points
/// `0 = t_0 < … < t_r = n` (one-dimensional lattice).
pub fn coding_bound_check(s: &SystemSpec, f: &PointSet, cuts: &[i64], eps: f64) -> Result<BoundReport> {
    check_eps(eps)?;
    if s.lattice_dim != 1 {
        return Err(Error::usage(
            "cut sequences need a one-dimensional lattice; use cover_bound_check",
        ));
    }
    if cuts.len() < 2 || cuts[0] != 0 || cuts.windows(2).any(|p| p[0] >= p[1]) {
        return Err(Error::usage(format!(
            "cut points {cuts:?} must increase strictly from 0"
        )));
    }
    let n = *cuts.last().unwrap();
    let lhs = exact_covering_number(s, f, &Window::cube(1, n)?, eps)?.cardinality;
    let mut terms = Vec::new();
    for p in cuts.windows(2) {
        let shifted = f.translate(s, &[p[0]])?;
        terms.push(exact_covering_number(s, &shifted, &Window::cube(1, p[1] - p[0])?, eps / 2.0)?.cardinality);
    }
    let rhs = terms.iter().product();
    Ok(BoundReport::new("coding bound", eps, lhs, rhs, terms))
}

/// `#(F, d_Ω, ε) ≤ ∏_n #(F, d_{Ω_n}, ε/2)` whenever `Ω ⊆ Ω_1 ∪ … ∪ Ω_N`.
pub fn cover_bound_check(
    s: &SystemSpec,
    f: &PointSet,
    omega: &Window,
    pieces: &[Window],
    eps: f64,
) -> Result<BoundReport> {
    check_eps(eps)?;
    if pieces.is_empty() {
        return Err(Error::usage("need at least one piece"));
    }
    if let Some(j) = omega
        .sites()
        .into_iter()
        .find(|j| !pieces.iter().any(|p| p.contains(j)))
    {
        return Err(Error::precondition(
            "Ω ⊆ ∪Ω_n",
            format!("site {j:?} is not covered by any piece"),
        ));
    }
    let lhs = exact_covering_number(s, f, omega, eps)?.cardinality;
    let terms: Vec<BigUint> = pieces
        .iter()
        .map(|p| exact_covering_number(s, f, p, eps / 2.0).map(|r| r.cardinality))
        .collect::<Result<_>>()?;
    let rhs = terms.iter().product();
    Ok(BoundReport::new("cover bound", eps, lhs, rhs, terms))
}

/// Report of `#(X, d_w, ε) ≤ #(X, d_{unit}, ε/2)^{vol B_1(w)}` on a box window.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrivialBoundReport {
    pub epsilon: f64,
    pub window: Window,
    #[serde(with = "decimal")]
    pub lhs: BigUint,
    #[serde(with = "decimal")]
    pub unit_count: BigUint,
    /// Number of unit cells `u + [0,1]^D` making up the window.
    pub cells: u64,
    /// `vol(B_1(∪ cells))`.
    pub dilated_volume: u64,
    pub log_lhs: f64,
    pub log_rhs: f64,
    pub holds: bool,
}

/// Each lattice site `u` of a box window stands for the unit cell
/// `u + [0,1]^D`; the unit window is the single site `0`.
pub fn trivial_bound_check(s: &SystemSpec, w: &Window, eps: f64) -> Result<TrivialBoundReport> {
    check_eps(eps)?;
    let Window::Box { lo, hi } = w else {
        return Err(Error::usage("trivial bound check needs a box window"));
    };
    s.check_dim(lo)?;
    let x = PointSet::whole(s);
    let lhs = exact_covering_number(s, &x, w, eps)?.cardinality;
    let unit = exact_covering_number(s, &x, &Window::centered(s.lattice_dim, 0), eps / 2.0)?.cardinality;
    let cells = w.len() as u64;
    let dilated_volume: u64 = lo.iter().zip(hi).map(|(a, b)| (b - a + 3) as u64).product();
    let via_cells = unit.pow(cells as u32);
    let rhs = unit.pow(dilated_volume as u32);
    let holds = lhs <= via_cells && via_cells <= rhs;
    Ok(TrivialBoundReport {
        epsilon: eps,
        window: w.clone(),
        log_lhs: ln_big(&lhs),
        log_rhs: dilated_volume as f64 * ln_big(&unit),
        lhs,
        unit_count: unit,
        cells,
        dilated_volume,
        holds,
    })
}

/// `#(X, d_w, ε) ≤ Σ_i #(K_i, d_w, ε)` for a cover `X = K_1 ∪ … ∪ K_n`.
pub fn decomposition_check(s: &SystemSpec, parts: &[PointSet], w: &Window, eps: f64) -> Result<BoundReport> {
    let lhs = exact_covering_number(s, &PointSet::whole(s), w, eps)?.cardinality;
    let terms: Vec<BigUint> = parts
        .iter()
        .map(|k| exact_covering_number(s, k, w, eps).map(|r| r.cardinality))
        .collect::<Result<_>>()?;
    let rhs = terms.iter().sum();
    Ok(BoundReport::new("decomposition", eps, lhs, rhs, terms))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fs2() -> SystemSpec {
        SystemSpec::full_shift("fs2", 2, 1)
    }

    fn golden() -> SystemSpec {
        SystemSpec::subshift("gm", vec![vec![1, 1], vec![1, 0]])
    }

    fn count(s: &SystemSpec, k: &PointSet, w: &Window, eps: f64) -> u64 {
        exact_covering_number(s, k, w, eps)
            .unwrap()
            .cardinality
            .to_u64()
            .unwrap()
    }

    #[test]
    fn relevant_radius_is_dyadic_exact() {
        assert_eq!(relevant_radius(1.0), None);
        assert_eq!(relevant_radius(0.6), Some(0));
        assert_eq!(relevant_radius(0.5), Some(0));
        assert_eq!(relevant_radius(0.4), Some(1));
        assert_eq!(relevant_radius(0.25), Some(1));
        assert_eq!(relevant_radius(0.125), Some(2));
    }

    #[test]
    fn exact_examples() {
        let s = fs2();
        let x = PointSet::whole(&s);
        assert_eq!(count(&s, &x, &Window::centered(1, 0), 0.6), 2);
        assert_eq!(count(&s, &x, &Window::cube(1, 5).unwrap(), 1.0), 1);
        assert_eq!(count(&s, &x, &Window::cube(1, 4).unwrap(), 0.25), 64);
    }

    #[test]
    fn singleton_and_large_eps() {
        let s = fs2();
        let p = Point::symbolic(&s, vec![-2], vec![2], vec![1, 0, 1, 1, 0], 0).unwrap();
        let k = PointSet::cloud(&s, vec![p]).unwrap();
        let w = Window::cube(1, 3).unwrap();
        let how = Enumeration::default();
        assert_eq!(
            greedy_spanning(&s, &k, &w, 0.1, &how).unwrap().cardinality,
            BigUint::one()
        );
        assert_eq!(
            greedy_separated(&s, &k, &w, 0.1, &how).unwrap().cardinality,
            BigUint::one()
        );
        let whole = PointSet::whole(&s);
        assert_eq!(
            greedy_spanning(&s, &whole, &w, 1.5, &how).unwrap().cardinality,
            BigUint::one()
        );
    }

    #[test]
    fn two_far_points_are_separated() {
        let s = fs2();
        let a = Point::zero(&s);
        let b = Point::symbolic(&s, vec![0], vec![0], vec![1], 0).unwrap();
        let k = PointSet::cloud(&s, vec![a, b]).unwrap();
        let r = greedy_separated(&s, &k, &Window::centered(1, 0), 0.4, &Enumeration::default()).unwrap();
        assert_eq!(r.cardinality, BigUint::from(2u32));
    }

    #[test]
    fn clouds_are_not_oracle_eligible() {
        let s = fs2();
        let k = PointSet::cloud(&s, vec![Point::zero(&s)]).unwrap();
        let e = exact_covering_number(&s, &k, &Window::cube(1, 2).unwrap(), 0.5);
        assert!(matches!(e, Err(Error::Unsupported(_))));
        assert!(exact_covering_number(&s, &PointSet::whole(&s), &Window::cube(1, 2).unwrap(), 0.0).is_err());
    }

    /// Transfer-matrix word count `1ᵀ A^{L−1} 1`.
    fn words(a: &[Vec<u8>], len: usize) -> BigUint {
        let k = a.len();
        let mut v = vec![BigUint::one(); k];
        for _ in 1..len {
            let mut n = vec![BigUint::zero(); k];
            for s in 0..k {
                for t in 0..k {
                    if a[s][t] == 1 {
                        n[t] += &v[s];
                    }
                }
            }
            v = n;
        }
        v.into_iter().sum()
    }

    #[test]
    fn golden_mean_matches_word_count() {
        let s = golden();
        let x = PointSet::whole(&s);
        let a = s.transition_matrix.clone().unwrap();
        for n in 1..=10 {
            for m in 1..=4 {
                let eps = 0.5f64.powi(m);
                let len = n as usize + 2 * (m as usize - 1);
                let got = exact_covering_number(&s, &x, &Window::cube(1, n).unwrap(), eps).unwrap();
                assert_eq!(got.cardinality, words(&a, len), "n={n} m={m}");
            }
        }
    }

    #[test]
    fn sft_sweep_agrees_with_product_rule_on_full_shift() {
        let plain = SystemSpec::full_shift("fs3", 3, 1);
        let swept = SystemSpec::subshift("fs3", vec![vec![1; 3]; 3]);
        let w = Window::explicit(vec![vec![0], vec![4], vec![5]]).unwrap();
        for eps in [0.6, 0.3, 0.2, 0.1] {
            let a = exact_covering_number(&plain, &PointSet::whole(&plain), &w, eps).unwrap();
            let b = exact_covering_number(&swept, &PointSet::whole(&swept), &w, eps).unwrap();
            assert_eq!(a.cardinality, b.cardinality, "eps={eps}");
        }
    }

    #[test]
    fn golden_mean_with_gaps_counts_extendable_patterns() {
        let s = golden();
        let x = PointSet::whole(&s);
        // Sites {0, 2}: every pair of symbols extends through site 1 (via 0).
        let w = Window::explicit(vec![vec![0], vec![2]]).unwrap();
        assert_eq!(count(&s, &x, &w, 0.5), 4);
        // Pinning site 1 to symbol 1 forces 0 on both sides.
        let mut fc = FactorConstraint::free();
        fc.sites.insert(vec![1], SiteConstraint::pin_symbol(1));
        let k = PointSet::cylinder(&s, vec![fc]).unwrap();
        assert_eq!(count(&s, &k, &w, 0.5), 1);
    }

    #[test]
    fn greedy_matches_exact_on_full_shift() {
        let s = fs2();
        let x = PointSet::whole(&s);
        for n in 1..=4 {
            for m in 1..=3 {
                let eps = 0.5f64.powi(m);
                let w = Window::cube(1, n).unwrap();
                let exact = exact_covering_number(&s, &x, &w, eps).unwrap().cardinality;
                let greedy = greedy_spanning(&s, &x, &w, eps, &Enumeration::default()).unwrap();
                assert_eq!(greedy.cardinality, exact);
                let sep = greedy_separated(&s, &x, &w, eps, &Enumeration::default()).unwrap();
                let sep2 = greedy_separated(&s, &x, &w, 2.0 * eps, &Enumeration::default()).unwrap();
                assert!(sep2.cardinality <= exact && exact <= sep.cardinality);
            }
        }
    }

    #[test]
    fn hilbert_cube_counts() {
        let s = SystemSpec::interval_product("hc", 1, 1);
        let x = PointSet::whole(&s);
        // ε = 1/8 on d_2: sites 0,1 need 4 each, sites −1,2 need 2, sites −2,3 need 1.
        assert_eq!(count(&s, &x, &Window::cube(1, 2).unwrap(), 0.125), 4 * 4 * 2 * 2);
        let g = grid_covering_number(&s, &x, &Window::cube(1, 2).unwrap(), 0.125, 1.0 / 64.0).unwrap();
        let exact = exact_covering_number(&s, &x, &Window::cube(1, 2).unwrap(), 0.125).unwrap();
        assert!(g.lower_bound <= exact.cardinality && exact.cardinality <= g.upper_bound);
    }

    #[test]
    fn grid_count_inside_greedy_bracket() {
        let s = SystemSpec::interval_product("hc", 1, 1);
        let x = PointSet::whole(&s);
        let w = Window::centered(1, 0);
        let h = 1.0 / 16.0;
        for eps in [0.4, 0.25, 0.2] {
            let g = grid_covering_number(&s, &x, &w, eps, h).unwrap();
            let how = Enumeration {
                region: Some((vec![-1], vec![1])),
                grid_step: Some(h),
            };
            let greedy = greedy_spanning(&s, &x, &w, eps, &how).unwrap();
            assert!(greedy.lower_bound <= g.cardinality, "eps={eps}");
            assert!(g.cardinality <= greedy.cardinality, "eps={eps}");
        }
    }

    #[test]
    fn coding_bound_examples() {
        let s = fs2();
        let x = PointSet::whole(&s);
        let r = coding_bound_check(&s, &x, &[0, 6], 0.5).unwrap();
        assert!(r.holds);
        let r = coding_bound_check(&s, &x, &[0, 3, 6], 0.5).unwrap();
        assert!(r.holds);
        assert_eq!(r.lhs, BigUint::from(64u32));
        assert_eq!(r.rhs, BigUint::from(32u32 * 32));
        let single = PointSet::pinned(&s, &Point::zero(&s), &box_sites(&[-5], &[12])).unwrap();
        let r = coding_bound_check(&s, &single, &[0, 2, 4], 0.5).unwrap();
        assert_eq!((r.lhs.to_u64(), r.rhs.to_u64()), (Some(1), Some(1)));
        assert!(coding_bound_check(&s, &x, &[0, 3, 2], 0.5).is_err());
    }

    #[test]
    fn trivial_bound_examples() {
        let s = fs2();
        assert!(
            trivial_bound_check(&s, &Window::new_box(vec![0], vec![4]).unwrap(), 0.5)
                .unwrap()
                .holds
        );
        let z2 = SystemSpec::full_shift("z2", 2, 2);
        let r = trivial_bound_check(&z2, &Window::new_box(vec![0, 0], vec![2, 2]).unwrap(), 0.5).unwrap();
        assert!(r.holds);
        assert_eq!(r.lhs, BigUint::from(512u32));
        assert_eq!(r.dilated_volume, 25);
    }

    #[test]
    fn decomposition_into_cylinders() {
        let s = golden();
        let parts: Vec<PointSet> = (0..2)
            .map(|a| {
                let mut fc = FactorConstraint::free();
                fc.sites.insert(vec![0], SiteConstraint::pin_symbol(a));
                PointSet::cylinder(&s, vec![fc]).unwrap()
            })
            .collect();
        for n in 1..6 {
            let r = decomposition_check(&s, &parts, &Window::cube(1, n).unwrap(), 0.25).unwrap();
            // Cylinders on a relevant site partition the balls exactly.
            assert_eq!(r.lhs, r.rhs);
        }
    }

    #[test]
    fn membership() {
        let s = fs2();
        let x = Point::symbolic(&s, vec![-1], vec![1], vec![1, 0, 1], 0).unwrap();
        let k = PointSet::pinned(&s, &x, &box_sites(&[-1], &[1])).unwrap();
        assert!(k.contains(&s, &x));
        assert!(!k.contains(&s, &Point::zero(&s)));
        let shifted = k.translate(&s, &[1]).unwrap();
        assert!(shifted.contains(&s, &crate::system::act(&s, &[1], &x).unwrap()));
    }
}
