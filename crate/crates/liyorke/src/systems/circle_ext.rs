//! A k-fold isometric extension of a circle system that is connected, hence
//! not conjugate to any skew product with a k-point fiber.
//!
//! The base circle is split into the closed upper arc `A = [0, 1/2]` and the
//! closed lower arc `B = [1/2, 1]`, meeting exactly at `a = 0` and `b = 1/2`.
//! Over `A` the fiber is the set of k-th roots of unity; over the interior
//! of `B` the root set is rotated by `t(v)/k` turns, where
//! `t(v) = dist(a, v) / dist(a, b)` sweeps from 1 at `b` to 0 at `a`. One
//! full positive traversal of `B` therefore winds the fiber by exactly `1/k`
//! of a turn, which glues the k sheets into a single connected space.
//!
//! The total-space map advances the base by a rigid rotation and rotates the
//! fiber by the `t`-displacement of the move, split into four cases by which
//! arcs the endpoints lie in. It commutes with the projection that drops the
//! fiber coordinate.

use rand::RngCore;

use crate::error::{Error, Result};
use crate::point::{CircleAngle, Point, ProductPoint};
use crate::systems::rotation::uniform_unit;

/// Tolerance for membership of the fiber coordinate in the rotated root set.
pub const FIBER_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleExtension {
    k: u32,
    alpha: f64,
}

impl CircleExtension {
    pub fn new(k: u32, alpha: f64) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidPoint("fiber order k must be at least 2"));
        }
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::InvalidPoint("rotation angle must lie in (0, 1)"));
        }
        Ok(CircleExtension { k, alpha })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    fn in_upper_arc(v: f64) -> bool {
        v <= 0.5
    }

    /// Arc-length parameter along `B`, scaled so `t(b) = 1` and `t(a) = 0`.
    fn t(v: f64) -> f64 {
        2.0 * (1.0 - v)
    }

    /// Fiber offset (in `t` units) of the root set over base position `v`.
    pub fn root_offset(v: f64) -> f64 {
        if Self::in_upper_arc(v) {
            0.0
        } else {
            Self::t(v)
        }
    }

    /// The `t`-displacement applied to the fiber when the base moves from
    /// `from` to `to`; the fiber is rotated by this many `1/k`-turns.
    /// Composing the four cases along any base loop returning to `A`
    /// telescopes to the (integer) number of positive traversals of `B`.
    pub fn fiber_turn(from: f64, to: f64) -> f64 {
        match (Self::in_upper_arc(from), Self::in_upper_arc(to)) {
            (true, true) => 0.0,
            (true, false) => Self::t(to),
            (false, true) => 1.0 - Self::t(from),
            (false, false) => Self::t(to) - Self::t(from),
        }
    }

    /// The point over base position `y` carrying root number `root`.
    pub fn point(&self, y: f64, root: u32) -> Result<Point> {
        if root >= self.k {
            return Err(Error::InvalidPoint("root index outside fiber order"));
        }
        let y = CircleAngle::new(y);
        let z = CircleAngle::new((f64::from(root) + Self::root_offset(y.value())) / f64::from(self.k));
        Ok(Point::product(Point::Circle(y), Point::Circle(z)))
    }

    /// Splits a total-space point into its base and fiber angles.
    pub fn coords(p: &Point) -> Result<(CircleAngle, CircleAngle)> {
        let pp = p.expect_product()?;
        Ok((*pp.left.expect_circle()?, *pp.right.expect_circle()?))
    }

    /// Verifies the fiber coordinate lies (within [`FIBER_TOL`]) on the root
    /// set allowed over the base coordinate.
    pub fn contains(&self, p: &Point) -> Result<()> {
        let (y, z) = Self::coords(p)?;
        let scaled = z.value() * f64::from(self.k) - Self::root_offset(y.value());
        let frac = crate::num::fract1(scaled);
        let off = frac.min(1.0 - frac);
        if off > FIBER_TOL * f64::from(self.k) {
            return Err(Error::InvalidPoint("fiber coordinate off the allowed root set"));
        }
        Ok(())
    }

    pub fn step(&self, p: &ProductPoint) -> Result<Point> {
        let y = p.left.expect_circle()?;
        let z = p.right.expect_circle()?;
        let y_next = y.rotate(self.alpha);
        let turn = Self::fiber_turn(y.value(), y_next.value());
        let z_next = z.rotate(turn / f64::from(self.k));
        Ok(Point::product(Point::Circle(y_next), Point::Circle(z_next)))
    }

    /// Drops the fiber coordinate.
    pub fn project(p: &Point) -> Result<Point> {
        let pp = p.expect_product()?;
        Ok(pp.left.clone())
    }

    pub fn random_point(&self, rng: &mut dyn RngCore) -> Point {
        let y = uniform_unit(rng);
        let root = rng.next_u32() % self.k;
        self.point(y, root).expect("root index is in range")
    }

    /// `count` grid points per root sheet, spread over the base circle and
    /// clear of the arc endpoints.
    pub fn grid(&self, count: usize) -> alloc::vec::Vec<Point> {
        let mut out = alloc::vec::Vec::with_capacity(count * self.k as usize);
        for i in 0..count {
            let y = (i as f64 + 0.27) / count as f64;
            for root in 0..self.k {
                out.push(self.point(y, root).expect("in range"));
            }
        }
        out
    }
}
