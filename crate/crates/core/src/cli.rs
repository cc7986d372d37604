//! Command-line driver: every computation behind a subcommand, with the
//! resolved configuration, seed and tool version embedded in each artifact.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::covering::{coding_bound_check, cover_bound_check, trivial_bound_check, PointSet};
use crate::entropy::{
    entropy_at_scale, mmdim_bound_report, mmdim_estimate, CountMethod, EntropyCurve, EntropyOptions, FitKind,
    MmdimEstimator,
};
use crate::error::{Error, Result};
use crate::lattice::Window;
use crate::local::{bowen_growth_check, compare, h_star_estimate, local_mmdim, sample_centers, LocalMmdimReport};
use crate::systems::{build_product, catalog, lookup, OracleKind, SystemCatalogEntry};
use crate::tiling::{multiscale_select, vitali_select, CubeFamily, Family, Region, Q};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub const OUT_DIR_ENV: &str = "MMDIM_OUT_DIR";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Json,
    Csv,
    Both,
}

#[derive(Subcommand, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    /// Dump the built-in system catalog.
    Systems,
    /// Entropy-at-scale curves S(X, ε).
    Entropy,
    /// Upper/lower metric mean dimension.
    Mmdim,
    /// Mean dimension of the Bowen-ball local entropies.
    Local,
    /// Local versus global estimates and the consistency inequality.
    Compare,
    /// Local entropy at the smallest scale (h-expansiveness evidence).
    Hstar,
    /// Vitali selection on a cube family read from --input.
    TileVitali,
    /// Multiscale selection on an instance read from --input.
    TileMultiscale,
    /// Exact covering inequalities and growth diagnostics.
    Check,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Systems => "systems",
            Command::Entropy => "entropy",
            Command::Mmdim => "mmdim",
            Command::Local => "local",
            Command::Compare => "compare",
            Command::Hstar => "hstar",
            Command::TileVitali => "tile-vitali",
            Command::TileMultiscale => "tile-multiscale",
            Command::Check => "check",
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "mmdim",
    version,
    about = "Entropy at scale and metric mean dimension of lattice systems"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// JSON run configuration; flags given explicitly take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Catalog id, `id*id` product, inline SystemSpec JSON, or a path to one.
    #[arg(long, global = true)]
    pub system: Option<String>,
    /// Scales, e.g. `0.5,0.25` or `2^-1..2^-6`.
    #[arg(long, global = true)]
    pub eps: Option<String>,
    /// Window sizes N, e.g. `1..12` or `1,2,4,8`.
    #[arg(long, global = true)]
    pub windows: Option<String>,
    /// Bowen-ball radius δ (default: a quarter of the diameter).
    #[arg(long, global = true)]
    pub delta: Option<f64>,
    /// Number of sampled Bowen-ball centers.
    #[arg(long, global = true)]
    pub centers: Option<usize>,
    /// Seed for center sampling.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Grid step for interval coordinates, e.g. `2^-9`; switches counts to the grid bracket.
    #[arg(long, global = true, value_parser = parse_eps_item)]
    pub grid_step: Option<f64>,
    /// Fraction of windows and scales used by the tail fits.
    #[arg(long, global = true)]
    pub tail_fraction: Option<f64>,
    /// How mean-dimension limits are read off the scale points.
    #[arg(long, global = true, value_enum)]
    pub estimator: Option<EstimatorArg>,
    /// Fit entropy by least squares over the tail instead of the largest tail slope.
    #[arg(long, global = true)]
    pub regression: bool,
    /// Output directory (default: $MMDIM_OUT_DIR, else the current directory).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Artifact formats to write.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Input JSON for the tiling subcommands.
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Slack β of the growth diagnostic.
    #[arg(long, global = true)]
    pub beta: Option<f64>,
    /// Threshold below which local entropy counts as vanishing.
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum EstimatorArg {
    Secant,
    Ratio,
}

/// Fully resolved parameters of a run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub system: String,
    pub eps_list: Vec<f64>,
    pub window_sizes: Vec<i64>,
    pub delta: Option<f64>,
    pub centers: usize,
    pub seed: u64,
    pub grid_step: Option<f64>,
    pub tail_fraction: f64,
    pub estimator: MmdimEstimator,
    pub fit_kind: FitKind,
    #[serde(skip_serializing)]
    pub output: OutputConfig,
    pub input: Option<String>,
    pub beta: f64,
    pub tolerance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OutputConfig {
    pub path: String,
    pub format: Format,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            path: ".".into(),
            format: Format::Both,
        }
    }
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            system: "full-shift-2".into(),
            eps_list: Vec::new(),
            window_sizes: Vec::new(),
            delta: None,
            centers: 32,
            seed: 0,
            grid_step: None,
            tail_fraction: 0.5,
            estimator: MmdimEstimator::Secant,
            fit_kind: FitKind::TailSlope,
            output: OutputConfig::default(),
            input: None,
            beta: 0.1,
            tolerance: 1e-9,
        }
    }
}

impl RunConfig {
    fn options(&self) -> EntropyOptions {
        EntropyOptions {
            fit_kind: self.fit_kind,
            tail_fraction: self.tail_fraction,
            method: match self.grid_step {
                Some(step) => CountMethod::Grid { step },
                None => CountMethod::Exact,
            },
            estimator: self.estimator,
        }
    }
}

pub fn parse_eps_item(s: &str) -> Result<f64> {
    let s = s.trim();
    if let Some(e) = s.strip_prefix("2^") {
        let k: i32 = e
            .parse()
            .map_err(|_| Error::usage(format!("eps: bad exponent in '{s}'")))?;
        return Ok(2f64.powi(k));
    }
    s.parse().map_err(|_| Error::usage(format!("eps: cannot parse '{s}'")))
}

pub fn parse_eps(s: &str) -> Result<Vec<f64>> {
    if let Some((a, b)) = s.split_once("..") {
        let (a, b) = (a.trim(), b.trim());
        let ka: i32 = a
            .strip_prefix("2^")
            .and_then(|x| x.parse().ok())
            .ok_or_else(|| Error::usage("eps: ranges must look like 2^-1..2^-6"))?;
        let kb: i32 = b
            .strip_prefix("2^")
            .and_then(|x| x.parse().ok())
            .ok_or_else(|| Error::usage("eps: ranges must look like 2^-1..2^-6"))?;
        if kb >= ka {
            return Err(Error::usage("eps: range must decrease, e.g. 2^-1..2^-6"));
        }
        return Ok((kb..=ka).rev().map(|k| 2f64.powi(k)).collect());
    }
    s.split(',').map(parse_eps_item).collect()
}

pub fn parse_windows(s: &str) -> Result<Vec<i64>> {
    let bad = || Error::usage(format!("windows: cannot parse '{s}'"));
    if let Some((a, b)) = s.split_once("..") {
        let a: i64 = a.trim().parse().map_err(|_| bad())?;
        let b: i64 = b.trim().parse().map_err(|_| bad())?;
        return Ok((a..=b).collect());
    }
    s.split(',').map(|x| x.trim().parse().map_err(|_| bad())).collect()
}

/// Resolves a system argument: catalog id, `a*b` product of ids, inline JSON, or a JSON file.
pub fn resolve_system(arg: &str) -> Result<SystemCatalogEntry> {
    let arg = arg.trim();
    if arg.starts_with('{') || Path::new(arg).extension().is_some_and(|e| e == "json") {
        let text = if arg.starts_with('{') {
            arg.to_string()
        } else {
            fs::read_to_string(arg)?
        };
        let spec: crate::system::SystemSpec = serde_json::from_str(&text)?;
        spec.validate()?;
        let oracle = if spec
            .leaves()
            .iter()
            .any(|l| l.point_kind == crate::system::PointKind::IntervalProduct)
        {
            OracleKind::Grid
        } else {
            OracleKind::Cylinder
        };
        return Ok(SystemCatalogEntry {
            spec,
            known_s: None,
            known_mmdim: None,
            provenance: "user supplied".into(),
            expansivity_constant: None,
            oracle,
        });
    }
    if arg.contains('*') {
        let parts = arg.split('*').map(lookup).collect::<Result<Vec<_>>>()?;
        return build_product(&parts);
    }
    lookup(arg)
}

fn resolve(cli: &Cli) -> Result<RunConfig> {
    let mut c = match &cli.config {
        Some(p) => serde_json::from_str(&fs::read_to_string(p)?)?,
        None => RunConfig::default(),
    };
    if let Some(s) = &cli.system {
        c.system = s.clone();
    }
    if let Some(e) = &cli.eps {
        c.eps_list = parse_eps(e)?;
    }
    if let Some(w) = &cli.windows {
        c.window_sizes = parse_windows(w)?;
    }
    if cli.delta.is_some() {
        c.delta = cli.delta;
    }
    if let Some(n) = cli.centers {
        c.centers = n;
    }
    if let Some(s) = cli.seed {
        c.seed = s;
    }
    if cli.grid_step.is_some() {
        c.grid_step = cli.grid_step;
    }
    if let Some(t) = cli.tail_fraction {
        c.tail_fraction = t;
    }
    if let Some(e) = cli.estimator {
        c.estimator = match e {
            EstimatorArg::Secant => MmdimEstimator::Secant,
            EstimatorArg::Ratio => MmdimEstimator::Ratio,
        };
    }
    if cli.regression {
        c.fit_kind = FitKind::LinearRegression;
    }
    if let Some(b) = cli.beta {
        c.beta = b;
    }
    if let Some(t) = cli.tolerance {
        c.tolerance = t;
    }
    if let Some(f) = cli.format {
        c.output.format = f;
    }
    c.output.path = match &cli.out {
        Some(p) => p.display().to_string(),
        None if cli.config.is_none() || c.output.path == "." => {
            std::env::var(OUT_DIR_ENV).unwrap_or_else(|_| c.output.path.clone())
        }
        None => c.output.path.clone(),
    };
    if let Some(i) = &cli.input {
        c.input = Some(i.display().to_string());
    }
    Ok(c)
}

/// Fills scale and window defaults from the system.
fn with_system_defaults(mut c: RunConfig, e: &SystemCatalogEntry) -> Result<RunConfig> {
    let interval = e.oracle == OracleKind::Grid;
    if c.eps_list.is_empty() {
        c.eps_list = if interval {
            (3..=7).map(|m| 0.5f64.powi(m)).collect()
        } else {
            (1..=6).map(|m| 0.5f64.powi(m)).collect()
        };
    }
    if c.window_sizes.is_empty() {
        c.window_sizes = match (e.spec.lattice_dim, e.oracle) {
            (1, OracleKind::Cylinder) => (1..=12).collect(),
            (1, OracleKind::TransferMatrix) => (1..=40).collect(),
            (1, OracleKind::Grid) => (1..=6).collect(),
            _ => (1..=4).collect(),
        };
    }
    if c.delta.is_none() {
        let d = e.spec.diameter;
        if d > 0.0 {
            c.delta = Some(d / 4.0);
        }
    }
    if let Some(d) = c.delta {
        if d.is_nan() || d <= 0.0 {
            return Err(Error::usage(format!("delta must be positive, got {d}")));
        }
    }
    if c.centers == 0 {
        return Err(Error::usage("centers must be positive"));
    }
    Ok(c)
}

fn delta_of(c: &RunConfig) -> Result<f64> {
    c.delta
        .ok_or_else(|| Error::usage("delta is required for a system of diameter 0"))
}

/// Result of a subcommand: JSON payload, CSV table and whether every checked property held.
struct Outcome {
    result: Value,
    csv_header: String,
    csv_rows: Vec<String>,
    summary: Vec<String>,
    ok: bool,
}

fn curves_csv(curves: &[EntropyCurve]) -> Vec<String> {
    curves.iter().flat_map(|c| c.csv_rows()).collect()
}

fn cmd_systems() -> Result<Outcome> {
    let cat = catalog();
    let rows = cat
        .iter()
        .map(|e| {
            format!(
                "{},{:?},{},{},{},{:?}",
                e.spec.id,
                e.spec.point_kind,
                e.spec.lattice_dim,
                e.known_mmdim.map_or(String::new(), |v| v.to_string()),
                e.expansivity_constant.map_or(String::new(), |v| v.to_string()),
                e.oracle
            )
        })
        .collect();
    Ok(Outcome {
        summary: cat.iter().map(|e| e.spec.id.clone()).collect(),
        result: serde_json::to_value(&cat)?,
        csv_header: "id,point_kind,lattice_dim,known_mmdim,expansivity_constant,oracle".into(),
        csv_rows: rows,
        ok: true,
    })
}

fn cmd_entropy(c: &RunConfig, e: &SystemCatalogEntry) -> Result<Outcome> {
    let x = PointSet::whole(&e.spec);
    let opts = c.options();
    let curves = crate::par_map(&c.eps_list, |&eps| {
        entropy_at_scale(&e.spec, &x, eps, &c.window_sizes, &opts)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    Ok(Outcome {
        summary: curves
            .iter()
            .map(|k| format!("eps={} S={:.6}", k.epsilon, k.fitted_s))
            .collect(),
        csv_rows: curves_csv(&curves),
        result: serde_json::to_value(&curves)?,
        csv_header: EntropyCurve::CSV_HEADER.into(),
        ok: true,
    })
}

fn cmd_mmdim(c: &RunConfig, e: &SystemCatalogEntry) -> Result<Outcome> {
    let est = mmdim_estimate(&e.spec, &c.eps_list, &c.window_sizes, &c.options())?;
    let bound = mmdim_bound_report(&est);
    Ok(Outcome {
        summary: vec![
            format!("upper={:.6} lower={:.6}", est.upper, est.lower),
            bound.statement.clone(),
        ],
        csv_rows: est.csv_rows(),
        result: json!({ "estimate": est, "bound": bound }),
        csv_header: EntropyCurve::CSV_HEADER.into(),
        ok: true,
    })
}

fn centers_for(c: &RunConfig, e: &SystemCatalogEntry) -> Result<Vec<crate::system::Point>> {
    sample_centers(&e.spec, c.centers, c.seed)
}

fn cmd_local(c: &RunConfig, e: &SystemCatalogEntry) -> Result<Outcome> {
    let centers = centers_for(c, e)?;
    let r = local_mmdim(
        &e.spec,
        delta_of(c)?,
        &c.eps_list,
        &centers,
        &c.window_sizes,
        &c.options(),
    )?;
    Ok(Outcome {
        summary: vec![format!(
            "local upper={:.6} lower={:.6} centers={}",
            r.estimate.upper, r.estimate.lower, r.center_count
        )],
        csv_rows: r.csv_rows(),
        result: serde_json::to_value(&r)?,
        csv_header: LocalMmdimReport::CSV_HEADER.into(),
        ok: true,
    })
}

fn cmd_compare(c: &RunConfig, e: &SystemCatalogEntry) -> Result<Outcome> {
    let centers = centers_for(c, e)?;
    let r = compare(
        &e.spec,
        delta_of(c)?,
        &c.eps_list,
        &centers,
        &c.window_sizes,
        &c.options(),
    )?;
    let ok = r.consistency.iter().all(|row| row.holds);
    let rows = r
        .consistency
        .iter()
        .zip(&r.local.estimate.points)
        .map(|(row, (_, local))| {
            format!(
                "{},{},{},{},{},{},{}",
                row.epsilon, row.global, local, row.global_at_delta, row.local_quarter, row.slack, row.holds
            )
        })
        .collect();
    Ok(Outcome {
        summary: vec![
            format!("global upper={:.6} lower={:.6}", r.global.upper, r.global.lower),
            format!(
                "local  upper={:.6} lower={:.6}",
                r.local.estimate.upper, r.local.estimate.lower
            ),
            format!("gap upper={:.6} lower={:.6}", r.gap_upper, r.gap_lower),
            format!("consistency inequality holds at every eps: {ok}"),
        ],
        csv_rows: rows,
        result: serde_json::to_value(&r)?,
        csv_header: "epsilon,S_global,S_local_max,S_at_delta,S_local_quarter,slack,holds".into(),
        ok,
    })
}

fn cmd_hstar(c: &RunConfig, e: &SystemCatalogEntry) -> Result<Outcome> {
    let centers = centers_for(c, e)?;
    let r = h_star_estimate(
        &e.spec,
        delta_of(c)?,
        &c.eps_list,
        &centers,
        &c.window_sizes,
        &c.options(),
        c.tolerance,
    )?;
    Ok(Outcome {
        summary: vec![format!(
            "h* ≈ {:.6}; h-expansive evidence: {}",
            r.value, r.h_expansive_evidence
        )],
        csv_rows: r.per_epsilon.iter().map(|(e, v)| format!("{e},{v}")).collect(),
        result: serde_json::to_value(&r)?,
        csv_header: "epsilon,max_S_local".into(),
        ok: true,
    })
}

fn read_input(c: &RunConfig) -> Result<String> {
    let p = c.input.as_ref().ok_or_else(|| Error::usage("--input is required"))?;
    Ok(fs::read_to_string(p)?)
}

fn cmd_vitali(c: &RunConfig) -> Result<Outcome> {
    let family: CubeFamily = serde_json::from_str(&read_input(c)?)?;
    let r = vitali_select(&family)?;
    let rows = r
        .selected_indices
        .iter()
        .zip(r.selected.cubes())
        .map(|(i, cube)| {
            let corner: Vec<String> = cube.corner.iter().map(|x| x.to_string()).collect();
            format!("{i},{},{}", corner.join(" "), cube.side)
        })
        .collect();
    Ok(Outcome {
        summary: vec![
            format!(
                "selected {} of {} cubes",
                r.selected_indices.len(),
                family.cubes().len()
            ),
            format!(
                "disjoint={} covered_by_tripled={} volume_bound={}",
                r.disjoint, r.covered_by_tripled, r.volume_bound
            ),
        ],
        ok: r.all_hold(),
        csv_rows: rows,
        result: serde_json::to_value(&r)?,
        csv_header: "input_index,corner,side".into(),
    })
}

/// Input of `tile-multiscale`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MultiscaleInput {
    pub omega: Region,
    pub families: Vec<Family>,
    pub eta: Q,
}

fn cmd_multiscale(c: &RunConfig) -> Result<Outcome> {
    let input: MultiscaleInput = serde_json::from_str(&read_input(c)?)?;
    let r = multiscale_select(&input.omega, &input.families, input.eta)?;
    let rows = r
        .steps
        .iter()
        .enumerate()
        .map(|(i, s)| {
            format!(
                "{i},{},{},{},{},{}",
                s.family, s.ell, s.interior_volume, s.selected_cubes, s.selected_volume
            )
        })
        .collect();
    Ok(Outcome {
        summary: vec![
            format!("K={} families={} claim_k={:?}", r.k_param, r.family_count, r.claim_k),
            format!(
                "disjoint={} contained={} vol(B_1(residual))={} < eta*vol={}: {}",
                r.disjoint,
                r.contained,
                r.dilated_residual_volume,
                r.eta * r.omega_volume,
                r.residual_bound
            ),
        ],
        ok: r.all_hold(),
        csv_rows: rows,
        result: serde_json::to_value(&r)?,
        csv_header: "step,family,ell,interior_volume,selected_cubes,selected_volume".into(),
    })
}

/// Cut sequences `0 = t_0 < … < t_r = n` with at most `max_blocks` blocks.
pub fn cut_sequences(n: i64, max_blocks: usize) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    fn go(n: i64, left: usize, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        let last = *cur.last().unwrap();
        if last == n {
            out.push(cur.clone());
            return;
        }
        if left == 0 {
            return;
        }
        for t in last + 1..=n {
            cur.push(t);
            go(n, left - 1, cur, out);
            cur.pop();
        }
    }
    go(n, max_blocks, &mut vec![0], &mut out);
    out
}

fn cmd_check(c: &RunConfig, e: &SystemCatalogEntry) -> Result<Outcome> {
    let s = &e.spec;
    let x = PointSet::whole(s);
    let symbolic = e.oracle != OracleKind::Grid;
    let mut rows: Vec<(String, bool, String)> = Vec::new();
    let eps_small: Vec<f64> = c.eps_list.iter().copied().filter(|v| *v < 1.0).take(2).collect();
    if s.lattice_dim == 1 {
        let mut all = true;
        let mut n_cases = 0;
        for n in 1..=8 {
            for cuts in cut_sequences(n, 3) {
                for &eps in &eps_small {
                    n_cases += 1;
                    all &= coding_bound_check(s, &x, &cuts, eps)?.holds;
                }
            }
        }
        rows.push(("coding_bound".into(), all, format!("{n_cases} cut sequences")));
    } else {
        let omega = Window::new_box(vec![0; s.lattice_dim], vec![3; s.lattice_dim])?;
        let mut pieces = Vec::new();
        for corner in crate::lattice::box_sites(&vec![0; s.lattice_dim], &vec![1; s.lattice_dim]) {
            let lo: Vec<i64> = corner.iter().map(|v| 2 * v).collect();
            let hi: Vec<i64> = lo.iter().map(|v| v + 1).collect();
            pieces.push(Window::new_box(lo, hi)?);
        }
        let mut all = true;
        for &eps in &eps_small {
            all &= cover_bound_check(s, &x, &omega, &pieces, eps)?.holds;
        }
        rows.push(("cover_bound".into(), all, format!("{} blocks", pieces.len())));
    }
    let mut all = true;
    let mut n_cases = 0;
    for side in 0..=3 {
        for &eps in &eps_small {
            let w = Window::new_box(vec![0; s.lattice_dim], vec![side; s.lattice_dim])?;
            n_cases += 1;
            all &= trivial_bound_check(s, &w, eps)?.holds;
        }
    }
    rows.push(("trivial_bound".into(), all, format!("{n_cases} windows")));

    if let Some(delta) = c.delta {
        let centers = centers_for(c, e)?;
        let opts = c.options();
        let eps = if symbolic { 0.125 } else { 1.0 / 16.0 };
        let n_list: Vec<i64> = if s.lattice_dim == 1 {
            if symbolic {
                vec![2, 4, 8, 16]
            } else {
                vec![2, 4, 8]
            }
        } else {
            vec![4, 8, 16, 32]
        };
        let reports = crate::par_map(&centers, |x0| {
            bowen_growth_check(s, x0, delta, eps, &n_list, c.beta, &c.window_sizes, &opts)
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
        let worst = reports
            .iter()
            .map(|r| r.g.last().unwrap().1 - r.a)
            .fold(f64::NEG_INFINITY, f64::max);
        rows.push((
            "bowen_growth".into(),
            reports.iter().all(|r| r.holds),
            format!("{} centers, max g(n_max) - a = {worst:.6}", reports.len()),
        ));
    }
    let ok = rows.iter().all(|r| r.1);
    Ok(Outcome {
        summary: rows
            .iter()
            .map(|(n, h, d)| format!("{n}: {} ({d})", if *h { "holds" } else { "FAILS" }))
            .collect(),
        csv_rows: rows.iter().map(|(n, h, d)| format!("{n},{h},{d}")).collect(),
        result: serde_json::to_value(
            rows.iter()
                .map(|(n, h, d)| json!({ "name": n, "holds": h, "detail": d }))
                .collect::<Vec<_>>(),
        )?,
        csv_header: "check,holds,detail".into(),
        ok,
    })
}

fn write_artifacts(cmd: Command, c: &RunConfig, out: &Outcome) -> Result<Vec<PathBuf>> {
    let dir = PathBuf::from(&c.output.path);
    fs::create_dir_all(&dir)?;
    let mut written = Vec::new();
    if matches!(c.output.format, Format::Json | Format::Both) {
        let doc = json!({
            "tool": "mmdim",
            "version": VERSION,
            "command": cmd.name(),
            "seed": c.seed,
            "config": c,
            "result": out.result,
        });
        let p = dir.join(format!("{}.json", cmd.name()));
        fs::write(&p, serde_json::to_string_pretty(&doc)? + "\n")?;
        written.push(p);
    }
    if matches!(c.output.format, Format::Csv | Format::Both) {
        let mut text = format!(
            "# mmdim {VERSION} command={} seed={} config={}\n{}\n",
            cmd.name(),
            c.seed,
            serde_json::to_string(c)?,
            out.csv_header
        );
        for r in &out.csv_rows {
            text.push_str(r);
            text.push('\n');
        }
        let p = dir.join(format!("{}.csv", cmd.name()));
        fs::write(&p, text)?;
        written.push(p);
    }
    Ok(written)
}

fn execute(cli: &Cli) -> Result<bool> {
    let base = resolve(cli)?;
    let (config, out) = match cli.command {
        Command::Systems => (base.clone(), cmd_systems()?),
        Command::TileVitali => (base.clone(), cmd_vitali(&base)?),
        Command::TileMultiscale => (base.clone(), cmd_multiscale(&base)?),
        cmd => {
            let e = resolve_system(&base.system)?;
            let c = with_system_defaults(base, &e)?;
            let out = match cmd {
                Command::Entropy => cmd_entropy(&c, &e)?,
                Command::Mmdim => cmd_mmdim(&c, &e)?,
                Command::Local => cmd_local(&c, &e)?,
                Command::Compare => cmd_compare(&c, &e)?,
                Command::Hstar => cmd_hstar(&c, &e)?,
                Command::Check => cmd_check(&c, &e)?,
                _ => unreachable!(),
            };
            (c, out)
        }
    };
    for line in &out.summary {
        println!("{line}");
    }
    for p in write_artifacts(cli.command, &config, &out)? {
        println!("wrote {}", p.display());
    }
    Ok(out.ok)
}

/// Exit status for an error: 3 for failed properties, 2 for everything else.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Property(_) => 3,
        _ => 2,
    }
}

fn run_with_threads(cli: &Cli) -> Result<bool> {
    #[cfg(feature = "parallel")]
    if let Some(n) = cli.threads {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::usage(format!("threads: {e}")))?;
        return pool.install(|| execute(cli));
    }
    execute(cli)
}

/// Parses `args` and runs; returns the process exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run_with_threads(&cli) {
        Ok(true) => 0,
        Ok(false) => {
            eprintln!("error: a checked property failed");
            3
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
