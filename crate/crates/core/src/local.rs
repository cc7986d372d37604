//! Bowen balls, local entropy at scale and the local/global comparison.
//!
//! `B_δ(x, d_Ω)` is itself a cylinder-type set: a site `j` is constrained
//! exactly when `δ · 2^{dist(j, Ω)} < 1`, to the per-site ball of that radius
//! around `x_j`. The two-sided ball `B_δ(x, d_Z)` is the decreasing
//! intersection over `Ω = [−M, M]^D`, and at any fixed resolution window the
//! restriction of the finite balls stops changing once `M` is large enough.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::covering::{
    assemble, enumerate, exact_covering_number, grid_covering_number, leaf_points, relevant_radius, relevant_sites,
    FactorConstraint, NetResult, PointSet, SiteConstraint,
};
use crate::entropy::{entropy_at_scale, CountMethod, EntropyCurve, EntropyOptions, MmdimEstimate};
use crate::error::{Error, Result};
use crate::lattice::{Site, Window};
use crate::system::{Point, PointKind, SiteValue, SystemSpec, Values};

/// Default cap on the truncation radius search.
pub const MAX_TRUNCATION: i64 = 256;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BowenBallSpec {
    pub center: Point,
    pub delta: f64,
    /// Starting truncation radius `M` of the window `[−M, M]^D`.
    pub truncation_radius: i64,
    /// Margin `R` of the window `[−R, L+R)^D` for the margin variant.
    #[serde(default)]
    pub margin_r: i64,
    /// Sites on which the finite balls must agree to count as converged;
    /// defaults to `[−M, M]^D`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resolution: Option<Window>,
    #[serde(default = "default_cap")]
    pub max_truncation: i64,
}

fn default_cap() -> i64 {
    MAX_TRUNCATION
}

impl BowenBallSpec {
    pub fn new(center: Point, delta: f64) -> Self {
        BowenBallSpec {
            center,
            delta,
            truncation_radius: 1,
            margin_r: 0,
            resolution: None,
            max_truncation: MAX_TRUNCATION,
        }
    }

    fn validate(&self, s: &SystemSpec) -> Result<()> {
        if self.delta.is_nan() || self.delta <= 0.0 || !self.delta.is_finite() {
            return Err(Error::usage(format!("delta must be positive, got {}", self.delta)));
        }
        if self.truncation_radius < 1 {
            return Err(Error::usage("truncation radius M must be positive"));
        }
        if self.margin_r < 0 {
            return Err(Error::usage("margin R must be nonnegative"));
        }
        self.center.validate(s)
    }
}

/// `B_δ(x, d_Ω)` as a cylinder-type point set.
pub fn ball_on_window(s: &SystemSpec, x: &Point, omega: &Window, delta: f64) -> Result<PointSet> {
    x.validate(s)?;
    let sites = match relevant_radius(delta) {
        None => Vec::new(),
        Some(r) => omega.dilate(r),
    };
    let mut factors = Vec::new();
    for p in leaf_points(x) {
        let mut fc = FactorConstraint::free();
        for j in &sites {
            let radius = delta * 2f64.powi(omega.distance(j) as i32);
            let c = match p.at(j) {
                SiteValue::Symbol(a) => SiteConstraint::pin_symbol(a),
                SiteValue::Real(v) => SiteConstraint::around(v, radius),
                SiteValue::Product(_) => unreachable!("leaf points are not products"),
            };
            fc.sites.insert(j.clone(), c);
        }
        factors.push(fc);
    }
    PointSet::cylinder(s, factors)
}

fn centered_box(dim: usize, m: i64) -> Window {
    Window::new_box(vec![-m; dim], vec![m; dim]).expect("m ≥ 0")
}

fn restrict(k: &PointSet, sites: &[Site]) -> Vec<Vec<SiteConstraint>> {
    k.factors
        .iter()
        .map(|f| sites.iter().map(|j| f.at(j).clone()).collect())
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BowenBall {
    pub set: PointSet,
    pub m_used: i64,
    pub converged: bool,
}

fn ball_converging(s: &SystemSpec, spec: &BowenBallSpec, resolution: &[Site]) -> Result<BowenBall> {
    let d = s.lattice_dim;
    let ball = |m: i64| ball_on_window(s, &spec.center, &centered_box(d, m), spec.delta);
    let mut m = spec.truncation_radius;
    let mut cur = ball(m)?;
    let mut next = ball(m + 1)?;
    loop {
        let after = ball(m + 2)?;
        let r = restrict(&cur, resolution);
        if r == restrict(&next, resolution) && r == restrict(&after, resolution) {
            return Ok(BowenBall {
                set: cur,
                m_used: m,
                converged: true,
            });
        }
        if m >= spec.max_truncation {
            return Ok(BowenBall {
                set: cur,
                m_used: m,
                converged: false,
            });
        }
        m += 1;
        cur = next;
        next = after;
    }
}

/// The finite-window ball at the starting truncation radius, flagged as
/// converged when the next two radii give the same ball on the resolution window.
pub fn bowen_ball(s: &SystemSpec, spec: &BowenBallSpec) -> Result<BowenBall> {
    spec.validate(s)?;
    let d = s.lattice_dim;
    let res = spec
        .resolution
        .clone()
        .unwrap_or_else(|| centered_box(d, spec.truncation_radius));
    let capped = BowenBallSpec {
        max_truncation: spec.truncation_radius,
        ..spec.clone()
    };
    ball_converging(s, &capped, &res.sites())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalEntropyReport {
    pub center: Point,
    pub delta: f64,
    pub epsilon: f64,
    #[serde(rename = "S_local")]
    pub s_local: f64,
    #[serde(rename = "M_used")]
    pub m_used: i64,
    pub converged: bool,
    pub curve: EntropyCurve,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

fn resolution_warning(delta: f64, opts: &EntropyOptions) -> Option<String> {
    match opts.method {
        CountMethod::Grid { step } if step >= delta => {
            Some(format!("grid step {step} does not resolve delta = {delta}"))
        }
        _ => None,
    }
}

/// `S(B_δ(x, d_Z), ε)`, computed on the ball whose restriction to every
/// sampled window's relevant sites has stabilised in `M`.
pub fn local_entropy(
    s: &SystemSpec,
    spec: &BowenBallSpec,
    eps: f64,
    window_sizes: &[i64],
    opts: &EntropyOptions,
) -> Result<LocalEntropyReport> {
    spec.validate(s)?;
    let n_max = *window_sizes
        .iter()
        .max()
        .ok_or_else(|| Error::usage("window sizes must be nonempty"))?;
    let resolution = relevant_sites(&Window::cube(s.lattice_dim, n_max)?, eps);
    let ball = ball_converging(s, spec, &resolution)?;
    let curve = entropy_at_scale(s, &ball.set, eps, window_sizes, opts)?;
    let mut warnings = curve.warnings.clone();
    warnings.extend(resolution_warning(spec.delta, opts));
    if !ball.converged {
        warnings.push(format!("ball not stable up to M = {}", ball.m_used));
    }
    Ok(LocalEntropyReport {
        center: spec.center.clone(),
        delta: spec.delta,
        epsilon: eps,
        s_local: curve.fitted_s,
        m_used: ball.m_used,
        converged: ball.converged,
        curve,
        warnings,
    })
}

/// Halton radical inverse of `i` in base `b`.
fn radical_inverse(mut i: u64, b: u64) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    while i > 0 {
        f /= b as f64;
        r += f * (i % b) as f64;
        i /= b;
    }
    r
}

const PRIMES: [u64; 24] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89,
];

/// Sites `[−1, 1]^D` carry individual sample values; every other site takes the tail.
fn interval_centers(leaf: &SystemSpec, count: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Point>> {
    let d = leaf.lattice_dim;
    let m = leaf.coords();
    let lo = vec![-1; d];
    let hi = vec![1; d];
    let sites = 3usize.pow(d as u32);
    let dims = (sites + 1) * m;
    if dims > PRIMES.len() {
        return Err(Error::Unsupported(format!(
            "quasi-random centers need {dims} ≤ {} dimensions",
            PRIMES.len()
        )));
    }
    let shift: Vec<f64> = (0..dims).map(|_| rng.gen::<f64>()).collect();
    (1..=count as u64)
        .map(|i| {
            let u: Vec<f64> = (0..dims)
                .map(|c| (radical_inverse(i, PRIMES[c]) + shift[c]).fract())
                .collect();
            let reals = u[..sites * m].chunks(m).map(|c| c.to_vec()).collect();
            Point::reals(leaf, lo.clone(), hi.clone(), reals, u[sites * m..].to_vec())
        })
        .collect()
}

/// Every admissible pattern on `[−r, r]^D` for the smallest `r` giving at least `count` of them.
fn cylinder_centers(leaf: &SystemSpec, count: usize) -> Result<Vec<Point>> {
    let d = leaf.lattice_dim;
    let whole = PointSet::whole(leaf);
    let mut r = 0;
    loop {
        let pts = enumerate(leaf, &whole, &vec![-r; d], &vec![r; d], None)?;
        if pts.len() >= count || pts.len() as f64 >= crate::covering::MAX_ENUMERATION as f64 / 2.0 {
            return Ok(pts);
        }
        let before = pts.len();
        r += 1;
        if before <= 1 && r > 4 {
            return Ok(pts);
        }
    }
}

/// Sample centers: cylinder representatives on symbolic factors, a shifted
/// Halton sequence on interval factors; products combine factor lists cyclically.
pub fn sample_centers(s: &SystemSpec, count: usize, seed: u64) -> Result<Vec<Point>> {
    if count == 0 {
        return Err(Error::usage("center count must be positive"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut lists = Vec::new();
    for leaf in s.leaves() {
        lists.push(match leaf.point_kind {
            PointKind::Symbolic => cylinder_centers(leaf, count)?,
            PointKind::IntervalProduct => interval_centers(leaf, count, &mut rng)?,
            PointKind::ProductOfSystems => unreachable!("leaves are never products"),
        });
    }
    if s.point_kind != PointKind::ProductOfSystems {
        return Ok(lists.pop().unwrap_or_default());
    }
    let n = lists.iter().map(|l| l.len()).max().unwrap_or(0).max(count);
    (0..n)
        .map(|i| assemble(s, lists.iter().map(|l| l[i % l.len()].clone()).collect()))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalMmdimReport {
    pub delta: f64,
    pub center_count: usize,
    /// `(ε, max over centers of S_local)` with the tail extraction applied.
    pub estimate: MmdimEstimate,
    pub per_center: Vec<LocalEntropyReport>,
}

impl LocalMmdimReport {
    pub const CSV_HEADER: &'static str = "center_id,delta,epsilon,S_local,M_used,converged";

    /// Rows ordered by `ε` then center index.
    pub fn csv_rows(&self) -> Vec<String> {
        let k = self.center_count;
        self.per_center
            .iter()
            .enumerate()
            .map(|(i, r)| {
                format!(
                    "{},{},{},{},{},{}",
                    i % k,
                    r.delta,
                    r.epsilon,
                    r.s_local,
                    r.m_used,
                    r.converged
                )
            })
            .collect()
    }

    /// `max_x S_local(δ, ε)` at each sampled `ε`.
    pub fn max_local(&self) -> Vec<(f64, f64)> {
        self.estimate.points.clone()
    }
}

fn local_table(
    s: &SystemSpec,
    delta: f64,
    eps_list: &[f64],
    centers: &[Point],
    window_sizes: &[i64],
    opts: &EntropyOptions,
) -> Result<Vec<LocalEntropyReport>> {
    if centers.is_empty() {
        return Err(Error::usage("centers must be nonempty"));
    }
    let cells: Vec<(f64, &Point)> = eps_list
        .iter()
        .flat_map(|&e| centers.iter().map(move |c| (e, c)))
        .collect();
    crate::par_map(&cells, |(e, c)| {
        local_entropy(s, &BowenBallSpec::new((*c).clone(), delta), *e, window_sizes, opts)
    })
    .into_iter()
    .collect()
}

fn max_per_eps(table: &[LocalEntropyReport], eps_list: &[f64], k: usize) -> Vec<(f64, f64)> {
    eps_list
        .iter()
        .enumerate()
        .map(|(i, &e)| {
            (
                e,
                table[i * k..(i + 1) * k].iter().map(|r| r.s_local).fold(0.0, f64::max),
            )
        })
        .collect()
}

/// Mean-dimension limits of `ε ↦ max_x S(B_δ(x, d_Z), ε)` over the given centers.
pub fn local_mmdim(
    s: &SystemSpec,
    delta: f64,
    eps_list: &[f64],
    centers: &[Point],
    window_sizes: &[i64],
    opts: &EntropyOptions,
) -> Result<LocalMmdimReport> {
    if eps_list.len() < 3 {
        return Err(Error::usage("local_mmdim needs at least 3 epsilon values"));
    }
    let table = local_table(s, delta, eps_list, centers, window_sizes, opts)?;
    let points = max_per_eps(&table, eps_list, centers.len());
    Ok(LocalMmdimReport {
        delta,
        center_count: centers.len(),
        estimate: MmdimEstimate::from_points(&s.id, points, opts)?,
        per_center: table,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MarginReport {
    pub delta: f64,
    pub margin_r: i64,
    pub side_l: i64,
    pub count: NetResult,
}

/// `#(B_δ(x, d_{[−R, L+R)^D}), d_{[0, L)^D}, ε)`.
pub fn local_entropy_with_margin(
    s: &SystemSpec,
    x: &Point,
    delta: f64,
    margin_r: i64,
    side_l: i64,
    eps: f64,
    method: CountMethod,
) -> Result<MarginReport> {
    if margin_r < 0 || side_l < 1 {
        return Err(Error::usage("need R ≥ 0 and L ≥ 1"));
    }
    if delta.is_nan() || delta <= 0.0 {
        return Err(Error::usage("delta must be positive"));
    }
    let d = s.lattice_dim;
    let omega = Window::new_box(vec![-margin_r; d], vec![side_l + margin_r - 1; d])?;
    let ball = ball_on_window(s, x, &omega, delta)?;
    let w = Window::cube(d, side_l)?;
    let count = match method {
        CountMethod::Exact => exact_covering_number(s, &ball, &w, eps)?,
        CountMethod::Grid { step } => grid_covering_number(s, &ball, &w, eps, step)?,
    };
    Ok(MarginReport {
        delta,
        margin_r,
        side_l,
        count,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthReport {
    pub center: Point,
    pub delta: f64,
    pub epsilon: f64,
    /// `(n, log #(B_δ(x, d_n), d_n, ε) / n^D)`.
    pub g: Vec<(i64, f64)>,
    /// `S(B_δ(x, d_Z), ε/4)`.
    pub a: f64,
    pub beta: f64,
    pub holds: bool,
}

/// Growth rate of the covering numbers of finite Bowen balls against the
/// reference level `a + β`, where `a` is the local entropy at scale `ε/4`.
#[allow(clippy::too_many_arguments)]
pub fn bowen_growth_check(
    s: &SystemSpec,
    x: &Point,
    delta: f64,
    eps: f64,
    n_list: &[i64],
    beta: f64,
    window_sizes: &[i64],
    opts: &EntropyOptions,
) -> Result<GrowthReport> {
    if n_list.is_empty() || n_list[0] < 1 || n_list.windows(2).any(|p| p[0] >= p[1]) {
        return Err(Error::usage("n_list must be positive and strictly increasing"));
    }
    let d = s.lattice_dim;
    let mut g = Vec::new();
    for &n in n_list {
        let w = Window::cube(d, n)?;
        let ball = ball_on_window(s, x, &w, delta)?;
        let c = match opts.method {
            CountMethod::Exact => exact_covering_number(s, &ball, &w, eps)?,
            CountMethod::Grid { step } => grid_covering_number(s, &ball, &w, eps, step)?,
        };
        g.push((n, c.log_count() / (n as f64).powi(d as i32)));
    }
    let a = local_entropy(s, &BowenBallSpec::new(x.clone(), delta), eps / 4.0, window_sizes, opts)?.s_local;
    let last = g.last().unwrap().1;
    Ok(GrowthReport {
        center: x.clone(),
        delta,
        epsilon: eps,
        holds: last <= a + beta,
        g,
        a,
        beta,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HStarReport {
    pub delta: f64,
    /// `(ε, max_x S_local)` for each sampled `ε`.
    pub per_epsilon: Vec<(f64, f64)>,
    /// The smallest-`ε` value.
    pub value: f64,
    pub tolerance: f64,
    pub h_expansive_evidence: bool,
    pub center_count: usize,
}

/// `max_x S(B_δ(x, d_Z), ε)` at the smallest sampled `ε`.
pub fn h_star_estimate(
    s: &SystemSpec,
    delta: f64,
    eps_list: &[f64],
    centers: &[Point],
    window_sizes: &[i64],
    opts: &EntropyOptions,
    tolerance: f64,
) -> Result<HStarReport> {
    if eps_list.is_empty() {
        return Err(Error::usage("eps_list must be nonempty"));
    }
    let table = local_table(s, delta, eps_list, centers, window_sizes, opts)?;
    let per_epsilon = max_per_eps(&table, eps_list, centers.len());
    let value = per_epsilon
        .iter()
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .map(|p| p.1)
        .unwrap_or(0.0);
    Ok(HStarReport {
        delta,
        value,
        tolerance,
        h_expansive_evidence: value < tolerance,
        per_epsilon,
        center_count: centers.len(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConsistencyRow {
    pub epsilon: f64,
    /// `S(X, ε)`.
    pub global: f64,
    /// `S(X, δ)`.
    pub global_at_delta: f64,
    /// `max_x S(B_δ(x, d_Z), ε/4)`.
    pub local_quarter: f64,
    /// `S(X, δ) + max_x S_local(δ, ε/4) − S(X, ε)`.
    pub slack: f64,
    pub holds: bool,
}

/// `S(X, ε) ≤ S(X, δ) + max_x S(B_δ(x, d_Z), ε/4)` at each sampled `ε`.
pub fn local_global_consistency(
    s: &SystemSpec,
    delta: f64,
    eps_list: &[f64],
    centers: &[Point],
    window_sizes: &[i64],
    opts: &EntropyOptions,
) -> Result<Vec<ConsistencyRow>> {
    let x = PointSet::whole(s);
    let at_delta = entropy_at_scale(s, &x, delta.min(1.0), window_sizes, opts)?.fitted_s;
    let quarters: Vec<f64> = eps_list.iter().map(|e| e / 4.0).collect();
    let table = local_table(s, delta, &quarters, centers, window_sizes, opts)?;
    let local = max_per_eps(&table, &quarters, centers.len());
    eps_list
        .iter()
        .zip(local)
        .map(|(&e, (_, lq))| {
            let global = entropy_at_scale(s, &x, e, window_sizes, opts)?.fitted_s;
            let slack = at_delta + lq - global;
            Ok(ConsistencyRow {
                epsilon: e,
                global,
                global_at_delta: at_delta,
                local_quarter: lq,
                slack,
                holds: slack >= -1e-9,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompareReport {
    pub system_id: String,
    pub delta: f64,
    pub global: MmdimEstimate,
    pub local: LocalMmdimReport,
    pub gap_upper: f64,
    pub gap_lower: f64,
    pub consistency: Vec<ConsistencyRow>,
}

/// Global mean-dimension estimate next to its Bowen-ball counterpart.
pub fn compare(
    s: &SystemSpec,
    delta: f64,
    eps_list: &[f64],
    centers: &[Point],
    window_sizes: &[i64],
    opts: &EntropyOptions,
) -> Result<CompareReport> {
    let global = crate::entropy::mmdim_estimate(s, eps_list, window_sizes, opts)?;
    let local = local_mmdim(s, delta, eps_list, centers, window_sizes, opts)?;
    let consistency = local_global_consistency(s, delta, eps_list, centers, window_sizes, opts)?;
    Ok(CompareReport {
        system_id: s.id.clone(),
        delta,
        gap_upper: (local.estimate.upper - global.upper).abs(),
        gap_lower: (local.estimate.lower - global.lower).abs(),
        global,
        local,
        consistency,
    })
}

/// True when `x` is a symbolic point (or product of them) for enumeration purposes.
pub fn is_symbolic(x: &Point) -> bool {
    leaf_points(x)
        .iter()
        .all(|p| matches!(p.values, Values::Symbols { .. }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn fs2() -> SystemSpec {
        SystemSpec::full_shift("fs2", 2, 1)
    }

    fn hc() -> SystemSpec {
        SystemSpec::interval_product("hc", 1, 1)
    }

    #[test]
    fn expansive_ball_is_a_singleton() {
        let s = fs2();
        let x = Point::symbolic(&s, vec![-2], vec![2], vec![1, 0, 1, 1, 0], 0).unwrap();
        let b = bowen_ball(&s, &BowenBallSpec::new(x.clone(), 0.4)).unwrap();
        assert!(b.converged);
        let pts = enumerate(&s, &b.set, &[-1], &[1], None).unwrap();
        assert_eq!(pts.len(), 1);
        assert!(b.set.contains(&s, &x));
    }

    #[test]
    fn large_delta_gives_whole_space() {
        let s = fs2();
        let b = bowen_ball(&s, &BowenBallSpec::new(Point::zero(&s), 1.0)).unwrap();
        assert_eq!(b.set.factors, PointSet::whole(&s).factors);
        let r = local_entropy(
            &s,
            &BowenBallSpec::new(Point::zero(&s), 1.0),
            0.25,
            &[1, 2, 3, 4],
            &Default::default(),
        )
        .unwrap();
        assert!((r.s_local - 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn hilbert_ball_contains_sup_neighbourhood() {
        let s = hc();
        let x = Point::reals(&s, vec![0], vec![0], vec![vec![0.5]], vec![0.5]).unwrap();
        let b = bowen_ball(&s, &BowenBallSpec::new(x, 0.25)).unwrap();
        let y = Point::reals(
            &s,
            vec![-3],
            vec![3],
            vec![
                vec![0.75],
                vec![0.3],
                vec![0.26],
                vec![0.5],
                vec![0.7],
                vec![0.25],
                vec![0.74],
            ],
            vec![0.6],
        )
        .unwrap();
        assert!(b.set.contains(&s, &y));
        let z = Point::reals(&s, vec![0], vec![0], vec![vec![0.8]], vec![0.5]).unwrap();
        assert!(!b.set.contains(&s, &z));
    }

    #[test]
    fn balls_shrink_with_truncation() {
        let s = hc();
        let x = sample_centers(&s, 1, 3).unwrap().remove(0);
        let w = Window::cube(1, 3).unwrap();
        let mut prev = None;
        for m in 1..6 {
            let b = ball_on_window(&s, &x, &centered_box(1, m), 0.25).unwrap();
            let c = exact_covering_number(&s, &b, &w, 1.0 / 32.0).unwrap().cardinality;
            if let Some(p) = prev {
                assert!(c <= p);
            }
            prev = Some(c);
        }
    }

    #[test]
    fn hilbert_local_entropy_slope() {
        let s = hc();
        let x = Point::reals(&s, vec![0], vec![0], vec![vec![0.5]], vec![0.5]).unwrap();
        let r = local_entropy(
            &s,
            &BowenBallSpec::new(x, 0.25),
            1.0 / 32.0,
            &[1, 2, 3, 4, 5, 6],
            &Default::default(),
        )
        .unwrap();
        assert!(r.converged);
        assert!((r.s_local - 3.0 * 2f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn margin_examples() {
        let s = fs2();
        let x = Point::symbolic(&s, vec![-3], vec![6], vec![0, 1, 1, 0, 1, 0, 0, 1, 1, 1], 0).unwrap();
        let whole = local_entropy_with_margin(&s, &x, 1.0, 0, 4, 0.5, CountMethod::Exact).unwrap();
        assert_eq!(whole.count.cardinality.to_u64(), Some(16));
        let mut prev = u64::MAX;
        for r in 0..4 {
            let c = local_entropy_with_margin(&s, &x, 0.4, r, 4, 0.5, CountMethod::Exact).unwrap();
            let c = c.count.cardinality.to_u64().unwrap();
            assert!(c <= prev);
            prev = c;
            if r >= 1 {
                assert_eq!(c, 1);
            }
        }
    }

    #[test]
    fn growth_and_h_star_on_expansive_shift() {
        let s = fs2();
        let centers = sample_centers(&s, 32, 0).unwrap();
        assert_eq!(centers.len(), 32);
        let opts = EntropyOptions::default();
        let sizes = [1, 2, 3, 4, 5, 6];
        for x in centers.iter().take(4) {
            let r = bowen_growth_check(&s, x, 0.4, 0.5, &[2, 4, 8], 0.1, &sizes, &opts).unwrap();
            assert!(r.g.iter().all(|p| p.1 == 0.0));
            assert!(r.holds && r.a == 0.0);
        }
        let h = h_star_estimate(&s, 0.4, &[0.25, 0.125], &centers[..4], &sizes, &opts, 1e-9).unwrap();
        assert!(h.h_expansive_evidence);
    }

    #[test]
    fn hilbert_cube_is_not_h_expansive() {
        let s = hc();
        let centers = sample_centers(&s, 8, 1).unwrap();
        let eps = [1.0 / 8.0, 1.0 / 16.0, 1.0 / 32.0];
        let h = h_star_estimate(&s, 0.25, &eps, &centers, &[1, 2, 3, 4], &Default::default(), 1e-9).unwrap();
        assert!(h.value > 0.0 && !h.h_expansive_evidence);
        assert!(h.per_epsilon.windows(2).all(|p| p[0].1 <= p[1].1));
    }

    #[test]
    fn centers_are_deterministic() {
        let s = hc();
        assert_eq!(sample_centers(&s, 5, 9).unwrap(), sample_centers(&s, 5, 9).unwrap());
        assert_ne!(sample_centers(&s, 5, 9).unwrap(), sample_centers(&s, 5, 10).unwrap());
        let gm = SystemSpec::subshift("gm", vec![vec![1, 1], vec![1, 0]]);
        assert_eq!(sample_centers(&gm, 32, 0).unwrap().len(), 34);
        assert!(is_symbolic(&sample_centers(&gm, 1, 0).unwrap()[0]));
    }
}
