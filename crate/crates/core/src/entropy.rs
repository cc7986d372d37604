//! Entropy at a fixed scale and upper/lower metric mean dimension from
//! finitely many windows and scales.

use serde::{Deserialize, Serialize};

use crate::covering::{exact_covering_number, grid_covering_number, NetResult, PointSet};
use crate::error::{Error, Result};
use crate::lattice::Window;
use crate::system::SystemSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitKind {
    TailSlope,
    LinearRegression,
}

/// Which covering count feeds the curves.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum CountMethod {
    Exact,
    /// Grid discretisation of interval coordinates with step `step`.
    Grid {
        step: f64,
    },
}

/// How the mean-dimension limits are extracted from `(ε, S)` points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MmdimEstimator {
    /// Slopes of `S` against `log(1/ε)` between consecutive scales.
    Secant,
    /// `S(ε) / log(1/ε)` at each scale.
    Ratio,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntropyOptions {
    pub fit_kind: FitKind,
    /// Fraction of the samples (or scales) forming the tail, in `(0, 1]`.
    pub tail_fraction: f64,
    pub method: CountMethod,
    pub estimator: MmdimEstimator,
}

impl Default for EntropyOptions {
    fn default() -> Self {
        EntropyOptions {
            fit_kind: FitKind::TailSlope,
            tail_fraction: 0.5,
            method: CountMethod::Exact,
            estimator: MmdimEstimator::Secant,
        }
    }
}

impl EntropyOptions {
    fn validate(&self) -> Result<()> {
        if !(self.tail_fraction > 0.0 && self.tail_fraction <= 1.0) {
            return Err(Error::usage(format!(
                "tail_fraction must lie in (0, 1], got {}",
                self.tail_fraction
            )));
        }
        if let CountMethod::Grid { step } = self.method {
            if step.is_nan() || step <= 0.0 {
                return Err(Error::usage(format!("grid step must be positive, got {step}")));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntropySample {
    /// Side `N` of the window `{0, …, N−1}^D`.
    pub window_size: i64,
    /// Normaliser `N^D`.
    pub volume: f64,
    pub log_count: f64,
    pub bracket: (f64, f64),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntropyCurve {
    pub system_id: String,
    pub epsilon: f64,
    pub samples: Vec<EntropySample>,
    #[serde(rename = "fitted_S")]
    pub fitted_s: f64,
    pub fit_kind: FitKind,
    pub tail_start: usize,
    /// Range of tail slopes compatible with the count brackets.
    pub slope_bracket: (f64, f64),
    pub method: CountMethod,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl EntropyCurve {
    pub const CSV_HEADER: &'static str = "epsilon,N,log_count_lo,log_count_hi,S_fit";

    pub fn csv_rows(&self) -> Vec<String> {
        self.samples
            .iter()
            .map(|p| {
                format!(
                    "{},{},{},{},{}",
                    self.epsilon, p.window_size, p.bracket.0, p.bracket.1, self.fitted_s
                )
            })
            .collect()
    }
}

fn tail_len(n: usize, frac: f64) -> usize {
    ((n as f64 * frac).ceil() as usize).clamp(2.min(n), n)
}

fn count(s: &SystemSpec, k: &PointSet, w: &Window, eps: f64, method: CountMethod) -> Result<NetResult> {
    match method {
        CountMethod::Exact => exact_covering_number(s, k, w, eps),
        CountMethod::Grid { step } => grid_covering_number(s, k, w, eps, step),
    }
}

/// Least-squares slope of `y` against `x`.
fn regression_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

/// Tail fit of a curve's samples: `(fitted, slope_bracket)`.
fn fit(samples: &[EntropySample], tail_start: usize, kind: FitKind) -> (f64, (f64, f64)) {
    let tail = &samples[tail_start..];
    let mut best = f64::NEG_INFINITY;
    let mut lo = f64::NEG_INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for p in tail.windows(2) {
        let dv = p[1].volume - p[0].volume;
        best = best.max((p[1].log_count - p[0].log_count) / dv);
        lo = lo.max((p[1].bracket.0 - p[0].bracket.1) / dv);
        hi = hi.max((p[1].bracket.1 - p[0].bracket.0) / dv);
    }
    let fitted = match kind {
        FitKind::TailSlope => best,
        FitKind::LinearRegression => {
            let x: Vec<f64> = tail.iter().map(|p| p.volume).collect();
            let y: Vec<f64> = tail.iter().map(|p| p.log_count).collect();
            regression_slope(&x, &y)
        }
    };
    (fitted.max(0.0), (lo.max(0.0), hi.max(0.0)))
}

/// `S(K, ε) ≈ limsup_N log #(K, d_{[0,N)^D}, ε) / N^D`, estimated by the
/// largest increment slope over the tail of `window_sizes`.
pub fn entropy_at_scale(
    s: &SystemSpec,
    k: &PointSet,
    eps: f64,
    window_sizes: &[i64],
    opts: &EntropyOptions,
) -> Result<EntropyCurve> {
    opts.validate()?;
    if window_sizes.len() < 3 {
        return Err(Error::usage("entropy_at_scale needs at least 3 window sizes"));
    }
    if window_sizes[0] < 1 || window_sizes.windows(2).any(|p| p[0] >= p[1]) {
        return Err(Error::usage(format!(
            "window sizes {window_sizes:?} must be positive and strictly increasing"
        )));
    }
    let d = s.lattice_dim;
    let mut samples = Vec::new();
    let mut warnings = Vec::new();
    for &n in window_sizes {
        let w = Window::cube(d, n)?;
        match count(s, k, &w, eps, opts.method) {
            Ok(r) => {
                let (lo, hi) = r.log_bracket();
                samples.push(EntropySample {
                    window_size: n,
                    volume: (n as f64).powi(d as i32),
                    log_count: r.log_count(),
                    bracket: (lo, hi),
                });
            }
            Err(e @ (Error::Usage(_) | Error::Unsupported(_))) if samples.len() >= 2 => {
                warnings.push(format!("counts unavailable from N = {n} on ({e}); tail shortened"));
                break;
            }
            Err(e) => return Err(e),
        }
    }
    if samples.iter().any(|p| !p.log_count.is_finite()) {
        return Err(Error::usage("point set is empty"));
    }
    let tail_start = samples.len() - tail_len(samples.len(), opts.tail_fraction);
    let (fitted_s, slope_bracket) = fit(&samples, tail_start, opts.fit_kind);
    Ok(EntropyCurve {
        system_id: s.id.clone(),
        epsilon: eps,
        samples,
        fitted_s,
        fit_kind: opts.fit_kind,
        tail_start,
        slope_bracket,
        method: opts.method,
        warnings,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MmdimEstimate {
    pub system_id: String,
    /// `(ε, S(X, ε))` in the order of decreasing `ε`.
    pub points: Vec<(f64, f64)>,
    pub upper: f64,
    pub lower: f64,
    pub epsilon_range: (f64, f64),
    pub estimator: MmdimEstimator,
    pub secant: (f64, f64),
    pub ratio: (f64, f64),
    pub tail_start: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub curves: Vec<EntropyCurve>,
}

impl MmdimEstimate {
    /// Upper and lower limits from `(ε, S)` points, `ε` strictly decreasing below 1.
    pub fn from_points(system_id: &str, points: Vec<(f64, f64)>, opts: &EntropyOptions) -> Result<Self> {
        opts.validate()?;
        if points.len() < 3 {
            return Err(Error::usage("mean dimension estimates need at least 3 scales"));
        }
        if points.windows(2).any(|p| p[0].0 <= p[1].0) {
            return Err(Error::usage("eps_list must be strictly decreasing"));
        }
        if points[0].0 >= 1.0 || points.last().unwrap().0 <= 0.0 {
            return Err(Error::usage("every epsilon must lie in (0, 1)"));
        }
        let tail_start = points.len() - tail_len(points.len(), opts.tail_fraction);
        let tail = &points[tail_start..];
        let inv = |e: f64| (1.0 / e).ln();
        let ratios: Vec<f64> = tail.iter().map(|(e, v)| v / inv(*e)).collect();
        let secants: Vec<f64> = tail
            .windows(2)
            .map(|p| (p[1].1 - p[0].1) / (inv(p[1].0) - inv(p[0].0)))
            .collect();
        let range = |v: &[f64]| {
            let hi = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max).max(0.0);
            let lo = v.iter().cloned().fold(f64::INFINITY, f64::min).max(0.0);
            (lo, hi)
        };
        let secant = range(&secants);
        let ratio = range(&ratios);
        let (lower, upper) = match opts.estimator {
            MmdimEstimator::Secant => secant,
            MmdimEstimator::Ratio => ratio,
        };
        Ok(MmdimEstimate {
            system_id: system_id.to_string(),
            epsilon_range: (points.last().unwrap().0, points[0].0),
            points,
            upper,
            lower,
            estimator: opts.estimator,
            secant,
            ratio,
            tail_start,
            curves: Vec::new(),
        })
    }

    pub const CSV_HEADER: &'static str = EntropyCurve::CSV_HEADER;

    pub fn csv_rows(&self) -> Vec<String> {
        self.curves.iter().flat_map(|c| c.csv_rows()).collect()
    }
}

/// Upper/lower metric mean dimension of the whole space.
pub fn mmdim_estimate(
    s: &SystemSpec,
    eps_list: &[f64],
    window_sizes: &[i64],
    opts: &EntropyOptions,
) -> Result<MmdimEstimate> {
    if eps_list.len() < 3 {
        return Err(Error::usage("mmdim_estimate needs at least 3 epsilon values"));
    }
    let x = PointSet::whole(s);
    let curves: Vec<EntropyCurve> = crate::par_map(eps_list, |&e| entropy_at_scale(s, &x, e, window_sizes, opts))
        .into_iter()
        .collect::<Result<_>>()?;
    let points = curves.iter().map(|c| (c.epsilon, c.fitted_s)).collect();
    let mut est = MmdimEstimate::from_points(&s.id, points, opts)?;
    est.curves = curves;
    Ok(est)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MmdimBoundReport {
    pub system_id: String,
    pub lower: f64,
    pub upper: f64,
    pub statement: String,
}

/// The chain `mdim ≤ lower ≤ upper` with the computed numbers filled in.
pub fn mmdim_bound_report(est: &MmdimEstimate) -> MmdimBoundReport {
    MmdimBoundReport {
        system_id: est.system_id.clone(),
        lower: est.lower,
        upper: est.upper,
        statement: format!("mdim ≤ {:.4} ≤ {:.4}", est.lower, est.upper),
    }
}

/// `S(X, ε) ≤ log #(X, d_{unit}, ε/2)` for a computed curve.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScaleBound {
    pub epsilon: f64,
    pub entropy: f64,
    pub bound: f64,
    pub holds: bool,
}

pub fn scale_bound_check(s: &SystemSpec, curve: &EntropyCurve) -> Result<ScaleBound> {
    let unit = Window::centered(s.lattice_dim, 0);
    let bound = exact_covering_number(s, &PointSet::whole(s), &unit, curve.epsilon / 2.0)?.log_count();
    Ok(ScaleBound {
        epsilon: curve.epsilon,
        entropy: curve.fitted_s,
        bound,
        holds: curve.fitted_s <= bound + 1e-9,
    })
}
