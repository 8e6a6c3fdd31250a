//! A desk-scale laboratory for topological dynamical systems.
//!
//! The crate provides truncated point representations with explicit depth
//! budgets ([`point`]), a catalog of concrete systems — full shifts, the
//! Chacon subshift, irrational rotations, odometers, and a k-fold circle
//! extension ([`systems`]) — skew-product combinators driven by permutation
//! cocycles or odometer fibers ([`skew`]), and finite-horizon verification
//! machinery for proximal/asymptotic/Li-Yorke pair classification,
//! characteristic chains, hitting times, and scrambled-set search
//! ([`analysis`]).
//!
//! Everything here is evidence at a fixed horizon, never proof: orbit limits
//! are observed through finite windows, and every estimate records the
//! horizon and thresholds it was computed with.
//!
//! The crate is `no_std` (with `alloc`); all IO, file formats, and the
//! experiment runner live in the companion `liyorke-cli` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod analysis;
pub mod cell;
pub mod error;
mod num;
pub mod perm;
pub mod point;
pub mod skew;
pub mod systems;

pub use error::{Error, Result};
pub use point::{distance, CircleAngle, FiberedPoint, OdometerDigits, Point, ProductPoint, SymbolicWord};
pub use systems::System;

/// Extra trusted symbols a point should carry beyond the experiment horizon,
/// so distances near the end of the window still resolve below every
/// threshold in use.
pub const COMPARISON_WINDOW: usize = 64;
