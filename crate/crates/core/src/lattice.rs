//! Lattice sites in `Z^D` and the finite windows that index orbit metrics.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A site of the acting lattice `Z^D`.
pub type Site = Vec<i64>;

/// Sup-norm of a lattice vector.
pub fn sup_norm(site: &[i64]) -> i64 {
    site.iter().map(|c| c.abs()).max().unwrap_or(0)
}

/// A finite, nonempty subset of `Z^D`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Window {
    /// The lattice box `{a ≤ n ≤ b}` (inclusive corners).
    Box {
        lo: Site,
        hi: Site,
    },
    Explicit {
        sites: BTreeSet<Site>,
    },
}

impl Window {
    pub fn new_box(lo: Site, hi: Site) -> Result<Self> {
        if lo.len() != hi.len() || lo.is_empty() {
            return Err(Error::usage("box corners must have the same positive dimension"));
        }
        if lo.iter().zip(&hi).any(|(a, b)| a > b) {
            return Err(Error::usage(format!("box corners {lo:?} ≤ {hi:?} fails componentwise")));
        }
        Ok(Window::Box { lo, hi })
    }

    pub fn explicit(sites: impl IntoIterator<Item = Site>) -> Result<Self> {
        let sites: BTreeSet<Site> = sites.into_iter().collect();
        let Some(first) = sites.iter().next() else {
            return Err(Error::usage("window must be nonempty"));
        };
        let dim = first.len();
        if dim == 0 || sites.iter().any(|s| s.len() != dim) {
            return Err(Error::usage("window sites must share one positive dimension"));
        }
        Ok(Window::Explicit { sites })
    }

    /// `{0, …, n−1}^D`, the window of `d_n` (and of `d_{[0,n]^D}` for lattice sub-actions).
    pub fn cube(dim: usize, n: i64) -> Result<Self> {
        if n < 1 {
            return Err(Error::usage("cube window side must be ≥ 1"));
        }
        Self::new_box(vec![0; dim], vec![n - 1; dim])
    }

    /// `{−m, …, m}^D`.
    pub fn centered(dim: usize, m: i64) -> Self {
        let m = m.max(0);
        Window::Box {
            lo: vec![-m; dim],
            hi: vec![m; dim],
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Window::Box { lo, .. } => lo.len(),
            Window::Explicit { sites } => sites.iter().next().map_or(0, |s| s.len()),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Window::Box { lo, hi } => lo.iter().zip(hi).map(|(a, b)| (b - a + 1) as usize).product(),
            Window::Explicit { sites } => sites.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, site: &[i64]) -> bool {
        match self {
            Window::Box { lo, hi } => site.iter().zip(lo.iter().zip(hi)).all(|(s, (a, b))| a <= s && s <= b),
            Window::Explicit { sites } => sites.contains(site),
        }
    }

    pub fn sites(&self) -> Vec<Site> {
        match self {
            Window::Box { lo, hi } => box_sites(lo, hi),
            Window::Explicit { sites } => sites.iter().cloned().collect(),
        }
    }

    /// Smallest lattice box containing the window.
    pub fn hull(&self) -> (Site, Site) {
        match self {
            Window::Box { lo, hi } => (lo.clone(), hi.clone()),
            Window::Explicit { sites } => {
                let dim = self.dim();
                let mut lo = vec![i64::MAX; dim];
                let mut hi = vec![i64::MIN; dim];
                for s in sites {
                    for i in 0..dim {
                        lo[i] = lo[i].min(s[i]);
                        hi[i] = hi[i].max(s[i]);
                    }
                }
                (lo, hi)
            }
        }
    }

    /// Sup-norm distance from `site` to the window.
    pub fn distance(&self, site: &[i64]) -> i64 {
        match self {
            Window::Box { lo, hi } => site
                .iter()
                .zip(lo.iter().zip(hi))
                .map(|(s, (a, b))| (a - s).max(s - b).max(0))
                .max()
                .unwrap_or(0),
            Window::Explicit { sites } => sites
                .iter()
                .map(|a| a.iter().zip(site).map(|(x, y)| (x - y).abs()).max().unwrap_or(0))
                .min()
                .unwrap_or(i64::MAX),
        }
    }

    /// `w + a`.
    pub fn translate(&self, a: &[i64]) -> Window {
        match self {
            Window::Box { lo, hi } => Window::Box {
                lo: add(lo, a),
                hi: add(hi, a),
            },
            Window::Explicit { sites } => Window::Explicit {
                sites: sites.iter().map(|s| add(s, a)).collect(),
            },
        }
    }

    /// `w ⊕ [−r, r]^D` as an explicit site list (sorted, deduplicated).
    pub fn dilate(&self, r: i64) -> Vec<Site> {
        if r <= 0 {
            return self.sites();
        }
        match self {
            Window::Box { lo, hi } => {
                let lo: Site = lo.iter().map(|x| x - r).collect();
                let hi: Site = hi.iter().map(|x| x + r).collect();
                box_sites(&lo, &hi)
            }
            Window::Explicit { sites } => {
                let offsets = box_sites(&vec![-r; self.dim()], &vec![r; self.dim()]);
                let mut out = BTreeSet::new();
                for s in sites {
                    for o in &offsets {
                        out.insert(add(s, o));
                    }
                }
                out.into_iter().collect()
            }
        }
    }

    pub fn is_subset(&self, other: &Window) -> bool {
        self.sites().iter().all(|s| other.contains(s))
    }
}

pub(crate) fn add(a: &[i64], b: &[i64]) -> Site {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// All sites of the inclusive box `[lo, hi]`, in lexicographic order.
pub fn box_sites(lo: &[i64], hi: &[i64]) -> Vec<Site> {
    if lo.iter().zip(hi).any(|(a, b)| a > b) {
        return Vec::new();
    }
    let mut out = vec![Vec::with_capacity(lo.len())];
    for (a, b) in lo.iter().zip(hi) {
        let mut next = Vec::with_capacity(out.len() * (b - a + 1) as usize);
        for prefix in &out {
            for c in *a..=*b {
                let mut s = prefix.clone();
                s.push(c);
                next.push(s);
            }
        }
        out = next;
    }
    out
}
