//! Exact cube calculus in `R^D`: regions, erosion and collars, the greedy
//! Vitali selection and the multiscale disjoint selection.
//!
//! All coordinates are rationals. Cubes are closed; "disjoint" means
//! interior-disjoint, and regions are identified up to null sets.

mod multiscale;
mod region;
mod vitali;

pub use multiscale::{k_of_eta, multiscale_select, Family, GridFamily, MultiscaleReport, Selection, StepReport};
pub use region::{b_r, r_boundary, r_interior, AxisBox, Raster, Region};
pub use vitali::{vitali_select, VitaliReport};

use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact rational; serialised as `[numerator, denominator]`.
pub type Q = Ratio<i128>;

pub fn q(n: i128) -> Q {
    Q::from_integer(n)
}

pub fn qr(n: i128, d: i128) -> Q {
    Q::new(n, d)
}

pub(crate) fn qpow(x: Q, e: usize) -> Q {
    (0..e).fold(Q::one(), |acc, _| acc * x)
}

/// Closed cube `u + [0, L]^D`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cube {
    pub corner: Vec<Q>,
    pub side: Q,
}

impl Cube {
    pub fn new(corner: Vec<Q>, side: Q) -> Result<Self> {
        if side <= Q::zero() {
            return Err(Error::usage(format!("cube side must be positive, got {side}")));
        }
        if corner.is_empty() {
            return Err(Error::usage("cube needs at least one coordinate"));
        }
        Ok(Cube { corner, side })
    }

    pub fn dim(&self) -> usize {
        self.corner.len()
    }

    pub fn volume(&self) -> Q {
        qpow(self.side, self.dim())
    }

    /// `3Λ`: same centre, three times the side.
    pub fn tripled(&self) -> Cube {
        Cube {
            corner: self.corner.iter().map(|c| c - self.side).collect(),
            side: self.side * q(3),
        }
    }

    pub fn as_box(&self) -> AxisBox {
        AxisBox {
            lo: self.corner.clone(),
            hi: self.corner.iter().map(|c| c + self.side).collect(),
        }
    }

    pub fn interiors_meet(&self, other: &Cube) -> bool {
        self.as_box().interiors_meet(&other.as_box())
    }
}

/// A nonempty finite family of cubes of one dimension.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawFamily")]
pub struct CubeFamily {
    cubes: Vec<Cube>,
    pub ell_max: Q,
    pub ell_min: Q,
}

#[derive(Deserialize)]
struct RawFamily {
    cubes: Vec<Cube>,
}

impl TryFrom<RawFamily> for CubeFamily {
    type Error = Error;

    fn try_from(raw: RawFamily) -> Result<Self> {
        CubeFamily::new(raw.cubes)
    }
}

impl CubeFamily {
    pub fn new(cubes: Vec<Cube>) -> Result<Self> {
        let first = cubes
            .first()
            .ok_or_else(|| Error::usage("cube family must be nonempty"))?;
        let d = first.dim();
        if cubes.iter().any(|c| c.dim() != d) {
            return Err(Error::usage("cubes of a family must share one dimension"));
        }
        if let Some(c) = cubes.iter().find(|c| c.side <= Q::zero()) {
            return Err(Error::usage(format!("cube side must be positive, got {}", c.side)));
        }
        let ell_max = cubes.iter().map(|c| c.side).max().unwrap();
        let ell_min = cubes.iter().map(|c| c.side).min().unwrap();
        Ok(CubeFamily {
            cubes,
            ell_max,
            ell_min,
        })
    }

    pub fn cubes(&self) -> &[Cube] {
        &self.cubes
    }

    pub fn dim(&self) -> usize {
        self.cubes[0].dim()
    }

    pub fn push(&mut self, c: Cube) -> Result<()> {
        let mut all = std::mem::take(&mut self.cubes);
        all.push(c);
        *self = CubeFamily::new(all)?;
        Ok(())
    }

    pub fn union(&self) -> Region {
        Region::from_boxes(self.dim(), self.cubes.iter().map(Cube::as_box).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tripled_cube_volume() {
        let c = Cube::new(vec![qr(1, 2), q(2)], qr(3, 4)).unwrap();
        assert_eq!(c.tripled().volume(), q(9) * c.volume());
        assert_eq!(c.tripled().corner, vec![qr(-1, 4), qr(5, 4)]);
    }

    #[test]
    fn family_caches_extremes() {
        let mut f = CubeFamily::new(vec![Cube::new(vec![q(0)], q(2)).unwrap()]).unwrap();
        f.push(Cube::new(vec![q(5)], qr(1, 3)).unwrap()).unwrap();
        assert_eq!((f.ell_max, f.ell_min), (q(2), qr(1, 3)));
        assert!(CubeFamily::new(vec![]).is_err());
        assert!(Cube::new(vec![q(0)], q(0)).is_err());
    }

    #[test]
    fn rationals_serialise_as_pairs() {
        let c = Cube::new(vec![qr(1, 2)], q(3)).unwrap();
        let s = serde_json::to_string(&c).unwrap();
        assert_eq!(s, r#"{"corner":[[1,2]],"side":[3,1]}"#);
        assert_eq!(serde_json::from_str::<Cube>(&s).unwrap(), c);
    }
}
