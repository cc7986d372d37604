//! Metric mean dimension and entropy at scale for `Z^D` actions.
//!
//! The crate builds concrete dynamical systems (full shifts, subshifts of
//! finite type, Hilbert-cube shifts and their products), computes minimal
//! `(d_w, ε)`-spanning cardinalities over lattice windows, turns them into
//! entropy-at-scale curves, mean-dimension estimates and Bowen-ball local
//! entropies, and implements the Vitali and multiscale cube selections used
//! to pass from local to global quantities.

#[cfg(feature = "cli")]
pub mod cli;
pub mod covering;
pub mod entropy;
pub mod error;
pub mod lattice;
pub mod local;
pub mod system;
pub mod systems;
pub mod tiling;

pub use error::{Error, Result};
pub use lattice::{Site, Window};
pub use system::{Point, SystemSpec};

/// Order-preserving map, fanned out over worker threads when `parallel` is enabled.
#[cfg(feature = "parallel")]
pub(crate) fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    items.iter().map(f).collect()
}
