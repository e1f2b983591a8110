//! Exact dynamics of the Gaussian B-happy function on Z[i].
//!
//! `S_B(a + bi)` replaces a Gaussian integer by the sum of the squares of
//! its signed base-B digit pairs. This crate provides the digit expansion and
//! the map itself, orbit classification, exhaustive enumeration of every
//! fixed point and cycle, heights of happy numbers, and searches and
//! certified constructions for arithmetic sequences of happy numbers.

pub mod checks;
pub mod digits;
pub mod dynamics;
pub mod error;
pub mod gaussian;
pub mod happy;
pub mod heights;
pub mod sequences;

pub use digits::{from_digits, to_digits, DigitExpansion, DigitPair};
pub use dynamics::{
    classify, enumerate_catalog, enumerate_catalog_with, is_happy, odd_base_fixed_points,
    region_bound, scan_grid, Cycle, CycleCatalog, GridScan, ScanOptions, Terminal, Trajectory,
};
pub use error::{Error, Result};
pub use gaussian::{Base, GaussianInt};
pub use happy::{canonical_rep, s_b, unit_orbit, Symmetry};
