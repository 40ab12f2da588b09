//! Greedy walks on point processes over one line, two intersecting lines and
//! two parallel lines.
//!
//! The crate is `no_std` (with `alloc`) and contains only pure computation:
//!
//! - [`geometry`]: the three metric spaces, sites, distances and window margins.
//! - [`processes`]: seeded generation of the five process constructions and the
//!   shift / mirror transformations of a realization.
//! - [`walk`]: the greedy-walk engine with an ordered unvisited index, a naive
//!   linear-scan oracle and a truncation-safe stopping rule.
//! - [`analysis`]: clusters, hitting times, `D_x`, event families, crossing and
//!   half-line statistics, lemma checkers and closed-form tail bounds.
//!
//! All transcendental math goes through `libm`, so a `(spec, seed)` pair yields
//! bit-identical realizations and trajectories on every platform.
#![cfg_attr(not(any(feature = "std", test)), no_std)]

extern crate alloc;

pub mod analysis;
mod error;
pub mod geometry;
pub mod processes;
pub mod walk;

pub use error::Error;
pub use geometry::{Geometry, Line, Metric, Site, Space};
pub use processes::{Construction, ProcessSpec, Realization};
pub use walk::{StopReason, StopRule, Trajectory};

pub type Result<T, E = Error> = core::result::Result<T, E>;
