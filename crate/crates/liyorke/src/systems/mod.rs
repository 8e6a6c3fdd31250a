//! The system catalog and the uniform step/sample interface.

mod chacon;
mod circle_ext;
mod net;
mod odometer;
mod pair;
mod rotation;
mod shift;

pub use chacon::{chacon_block_len, chacon_prefix, Chacon, DEFAULT_LEVEL};
pub use circle_ext::{CircleExtension, FIBER_TOL};
pub use net::Net;
pub use odometer::Odometer;
pub use pair::PairWalker;
pub use rotation::{Rotation, DEFAULT_ALPHA};
pub use shift::FullShift;

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;

use rand::RngCore;

use crate::cell::Cell;
use crate::error::{Error, Result};
use crate::num::pow2_neg;
use crate::point::{CircleAngle, Point};
use crate::skew::{OdometerSkew, SkewProduct};

/// Any dynamical system the laboratory can drive: a base system from the
/// catalog, a plain product, or a skew product built by a combinator.
///
/// Systems are immutable after construction and safe to share across
/// workers.
#[derive(Debug, Clone)]
pub enum System {
    Shift(FullShift),
    Chacon(Chacon),
    Rotation(Rotation),
    Odometer(Odometer),
    CircleExtension(CircleExtension),
    Product(Box<System>, Box<System>),
    Skew(SkewProduct),
    OdometerSkew(OdometerSkew),
}

impl System {
    pub fn product(left: System, right: System) -> System {
        System::Product(Box::new(left), Box::new(right))
    }

    /// Applies the system map once.
    pub fn step(&self, p: &Point) -> Result<Point> {
        match (self, p) {
            (System::Shift(s), Point::Word(w)) => s.step(w).map(Point::Word),
            (System::Chacon(c), Point::Word(w)) => c.step(w).map(Point::Word),
            (System::Rotation(r), Point::Circle(a)) => Ok(Point::Circle(r.step(a))),
            (System::Odometer(o), Point::Odometer(d)) => o.step(d).map(Point::Odometer),
            (System::CircleExtension(e), Point::Product(pp)) => e.step(pp),
            (System::Product(l, r), Point::Product(pp)) => {
                Ok(Point::product(l.step(&pp.left)?, r.step(&pp.right)?))
            }
            (System::Skew(sk), Point::Fibered(fp)) => sk.step(fp),
            (System::OdometerSkew(os), Point::Product(pp)) => os.step(pp),
            (sys, p) => Err(Error::KindMismatch { left: sys.expected_kind(), right: p.kind() }),
        }
    }

    /// Applies the system map `n` times.
    pub fn iterate(&self, p: &Point, n: usize) -> Result<Point> {
        let mut cur = p.clone();
        for _ in 0..n {
            cur = self.step(&cur)?;
        }
        Ok(cur)
    }

    /// Distances `d(T^i x, T^i y)` for `i = 0..=n`.
    pub fn pair_orbit_distances(&self, x: &Point, y: &Point, n: usize) -> Result<Vec<f64>> {
        pair::pair_orbit_distances(self, x, y, n)
    }

    fn expected_kind(&self) -> &'static str {
        match self {
            System::Shift(_) | System::Chacon(_) => "word",
            System::Rotation(_) => "circle",
            System::Odometer(_) => "odometer",
            System::CircleExtension(_) | System::Product(..) | System::OdometerSkew(_) => {
                "product"
            }
            System::Skew(_) => "fibered",
        }
    }

    /// Catalog identifier, reparsable for base systems.
    pub fn identifier(&self) -> String {
        use core::fmt::Write;
        let mut s = String::new();
        match self {
            System::Shift(f) => {
                let _ = write!(s, "full-shift:{}", f.alphabet_size());
            }
            System::Chacon(_) => s.push_str("chacon"),
            System::Rotation(r) => {
                let _ = write!(s, "rotation:{}", r.alpha());
            }
            System::Odometer(o) => {
                s.push_str("odometer:");
                for (i, b) in o.bases().iter().enumerate() {
                    if i > 0 {
                        s.push(',');
                    }
                    let _ = write!(s, "{b}");
                }
            }
            System::CircleExtension(e) => {
                let _ = write!(s, "circle-ext:k={}", e.k());
                if e.alpha() != DEFAULT_ALPHA {
                    let _ = write!(s, ",alpha={}", e.alpha());
                }
            }
            System::Product(l, r) => {
                let _ = write!(s, "product({},{})", l.identifier(), r.identifier());
            }
            System::Skew(sk) => {
                let _ = write!(s, "skew({};m={})", sk.base().identifier(), sk.cocycle().fiber_size());
            }
            System::OdometerSkew(os) => {
                let _ = write!(s, "odometer-skew({};fiber=", os.base().identifier());
                for (i, b) in os.fiber().bases().iter().enumerate() {
                    if i > 0 {
                        s.push(',');
                    }
                    let _ = write!(s, "{b}");
                }
                s.push(')');
            }
        }
        s
    }

    /// Validates that `p` is a plausible point of this system's space.
    /// Symbolic membership in the Chacon language is spot-checked over a
    /// bounded prefix; full verification is not attempted.
    pub fn contains(&self, p: &Point) -> Result<()> {
        match (self, p) {
            (System::Shift(s), Point::Word(w)) => {
                if w.alphabet_size() != s.alphabet_size() {
                    return Err(Error::Incompatible("word alphabet differs from shift alphabet"));
                }
                Ok(())
            }
            (System::Chacon(c), Point::Word(w)) => {
                if w.alphabet_size() != 2 {
                    return Err(Error::Incompatible("chacon points are binary"));
                }
                let probe = w.depth().min(64);
                if probe > 0 {
                    let prefix = &w.symbols()[..probe];
                    let found = c
                        .word()
                        .windows(probe)
                        .any(|win| win == prefix);
                    if !found {
                        return Err(Error::InvalidPoint("window does not occur in the chacon word"));
                    }
                }
                Ok(())
            }
            (System::Rotation(_), Point::Circle(_)) => Ok(()),
            (System::Odometer(o), Point::Odometer(d)) => {
                if d.bases() != o.bases() {
                    return Err(Error::Incompatible("point bases differ from odometer"));
                }
                if d.is_poisoned() {
                    return Err(Error::Poisoned);
                }
                Ok(())
            }
            (System::CircleExtension(e), p @ Point::Product(_)) => e.contains(p),
            (System::Product(l, r), Point::Product(pp)) => {
                l.contains(&pp.left)?;
                r.contains(&pp.right)
            }
            (System::Skew(sk), Point::Fibered(fp)) => {
                if fp.label >= sk.cocycle().fiber_size() {
                    return Err(Error::InvalidPoint("label outside fiber"));
                }
                sk.base().contains(&fp.base)
            }
            (System::OdometerSkew(os), Point::Product(pp)) => {
                let d = pp.right.expect_odometer()?;
                if d.bases() != os.fiber().bases() {
                    return Err(Error::Incompatible("fiber bases differ from selector fiber"));
                }
                os.base().contains(&pp.left)
            }
            (sys, p) => Err(Error::KindMismatch { left: sys.expected_kind(), right: p.kind() }),
        }
    }

    /// Projection onto the factor an extension was built over.
    pub fn factor_project(&self, p: &Point) -> Result<Point> {
        match self {
            System::CircleExtension(_) => CircleExtension::project(p),
            System::Skew(_) => Ok(p.expect_fibered()?.base.clone()),
            System::OdometerSkew(_) => Ok(p.expect_product()?.left.clone()),
            _ => Err(Error::Unsupported("system is not an extension")),
        }
    }

    /// A random point with at least `depth` trusted symbols on every
    /// symbolic component.
    pub fn random_point(&self, depth: usize, rng: &mut dyn RngCore) -> Result<Point> {
        match self {
            System::Shift(s) => Ok(Point::Word(s.random_word(depth, rng))),
            System::Chacon(c) => Ok(Point::Word(c.random_point(depth, rng)?)),
            System::Rotation(r) => Ok(Point::Circle(r.random_point(rng))),
            System::Odometer(o) => Ok(Point::Odometer(o.random_point(rng))),
            System::CircleExtension(e) => Ok(e.random_point(rng)),
            System::Product(l, r) => {
                Ok(Point::product(l.random_point(depth, rng)?, r.random_point(depth, rng)?))
            }
            System::Skew(sk) => {
                let label = (rng.next_u32() as usize) % sk.cocycle().fiber_size();
                Ok(Point::fibered(sk.base().random_point(depth, rng)?, label))
            }
            System::OdometerSkew(os) => Ok(Point::product(
                os.base().random_point(depth, rng)?,
                Point::Odometer(os.fiber().random_point(rng)),
            )),
        }
    }

    /// An independent "generic" partner for `x`, used to approximate
    /// transitive pairs: an unrelated random point of the same space (same
    /// depth and, for fibered points, the same label).
    pub fn generic_partner(&self, x: &Point, rng: &mut dyn RngCore) -> Result<Point> {
        match (self, x) {
            (System::Skew(sk), Point::Fibered(fp)) => {
                Ok(Point::fibered(sk.base().generic_partner(&fp.base, rng)?, fp.label))
            }
            (System::Product(l, r), Point::Product(pp)) => Ok(Point::product(
                l.generic_partner(&pp.left, rng)?,
                r.generic_partner(&pp.right, rng)?,
            )),
            (System::OdometerSkew(os), Point::Product(pp)) => Ok(Point::product(
                os.base().generic_partner(&pp.left, rng)?,
                Point::Odometer(os.fiber().random_point(rng)),
            )),
            _ => {
                let depth = x.min_depth().unwrap_or(0);
                self.random_point(depth, rng)
            }
        }
    }

    /// Candidate partners within `radius` of `x` for a Li-Yorke witness
    /// search; callers classify each candidate and keep the first verified
    /// hit.
    ///
    /// Shift bases use constructive tail surgery, the Chacon subshift reuses
    /// occurrences of `x`'s prefix elsewhere in the word, and isometric
    /// systems return small perturbations (whose classification will come
    /// back negative — distal systems have no witnesses to find).
    pub fn partner_candidates(
        &self,
        x: &Point,
        radius: f64,
        attempts: usize,
        rng: &mut dyn RngCore,
    ) -> Result<Vec<Point>> {
        if !(radius > 0.0) {
            return Err(Error::InvalidPoint("radius must be positive"));
        }
        match (self, x) {
            (System::Shift(s), Point::Word(w)) => {
                let p = prefix_len_for(radius);
                (0..attempts)
                    .map(|_| s.surgery_partner(w, p, rng).map(Point::Word))
                    .collect()
            }
            (System::Chacon(c), Point::Word(w)) => {
                let p = prefix_len_for(radius);
                let offsets = c.partner_candidates(w, p, attempts, rng)?;
                offsets
                    .into_iter()
                    .take(attempts)
                    .map(|o| c.point(w.depth(), o).map(Point::Word))
                    .collect()
            }
            (System::Rotation(_), Point::Circle(a)) => Ok((0..attempts)
                .map(|_| {
                    let u = rotation::uniform_unit(rng) * 2.0 - 1.0;
                    Point::Circle(a.rotate(0.5 * radius * u))
                })
                .collect()),
            (System::Odometer(o), Point::Odometer(d)) => {
                let keep = prefix_len_for(radius).saturating_sub(1).min(o.bases().len());
                Ok((0..attempts)
                    .map(|_| {
                        let mut digits = d.digits().to_vec();
                        for (j, b) in o.bases().iter().enumerate().skip(keep) {
                            digits[j] = rng.next_u32() % b;
                        }
                        Point::Odometer(
                            crate::point::OdometerDigits::new(o.shared_bases(), digits)
                                .expect("digits within bases"),
                        )
                    })
                    .collect())
            }
            (System::CircleExtension(e), p @ Point::Product(_)) => {
                let (y, z) = CircleExtension::coords(p)?;
                let root = nearest_root(e, y, z);
                Ok((0..attempts)
                    .map(|_| {
                        let u = rotation::uniform_unit(rng) * 2.0 - 1.0;
                        let y2 = CircleAngle::new(y.value() + radius * u / 3.0);
                        e.point(y2.value(), root).expect("root in range")
                    })
                    .collect())
            }
            (System::Product(l, _), Point::Product(pp)) => {
                let lefts = l.partner_candidates(&pp.left, radius, attempts, rng)?;
                Ok(lefts
                    .into_iter()
                    .map(|lp| Point::product(lp, pp.right.clone()))
                    .collect())
            }
            (System::Skew(sk), Point::Fibered(fp)) => {
                let bases = sk.base().partner_candidates(&fp.base, radius, attempts, rng)?;
                Ok(bases.into_iter().map(|b| Point::fibered(b, fp.label)).collect())
            }
            (System::OdometerSkew(os), Point::Product(pp)) => {
                let bases = os.base().partner_candidates(&pp.left, radius, attempts, rng)?;
                Ok(bases
                    .into_iter()
                    .map(|b| Point::product(b, pp.right.clone()))
                    .collect())
            }
            (sys, p) => Err(Error::KindMismatch { left: sys.expected_kind(), right: p.kind() }),
        }
    }

    /// A random point inside the given cell, per the system's natural
    /// sampler.
    pub fn random_point_in(
        &self,
        cell: &Cell,
        depth: usize,
        rng: &mut dyn RngCore,
    ) -> Result<Point> {
        match (self, cell) {
            (_, Cell::Whole) => self.random_point(depth, rng),
            (System::Shift(s), Cell::Cylinder(prefix)) => {
                let w = s.random_word(depth, rng);
                let mut digits = w.symbols().to_vec();
                if prefix.len() > digits.len() {
                    return Err(Error::DepthExhausted {
                        needed: prefix.len(),
                        available: digits.len(),
                    });
                }
                digits[..prefix.len()].copy_from_slice(prefix);
                Ok(Point::Word(crate::point::SymbolicWord::new(s.alphabet_size(), digits)?))
            }
            (System::Chacon(c), Cell::Cylinder(prefix)) => {
                let occ = c.occurrences(prefix, depth, 1, rng);
                match occ.first() {
                    Some(&o) => Ok(Point::Word(c.point(depth, o)?)),
                    None => Err(Error::InvalidPoint("cell word does not occur in the language")),
                }
            }
            (System::Rotation(_), Cell::Arc { lo, hi }) => {
                let span = if hi >= lo { hi - lo } else { 1.0 - lo + hi };
                let v = lo + rotation::uniform_unit(rng) * span;
                Ok(Point::Circle(CircleAngle::new(v)))
            }
            (System::Skew(sk), cell) => {
                let label = (rng.next_u32() as usize) % sk.cocycle().fiber_size();
                Ok(Point::fibered(sk.base().random_point_in(cell, depth, rng)?, label))
            }
            _ => Err(Error::Unsupported("no sampler for this system/cell combination")),
        }
    }

    /// A finite net of cells used to score how much of the space (or the
    /// square space, for pair orbits) an orbit visits. `resolution` is the
    /// window length on symbolic systems and the arc count on circle
    /// systems.
    pub fn net(&self, resolution: usize) -> Result<Net> {
        Net::build(self, resolution)
    }
}

/// Smallest `p` with `2^-p < radius`.
fn prefix_len_for(radius: f64) -> usize {
    let mut p = 0usize;
    while pow2_neg(p) >= radius && p < 1100 {
        p += 1;
    }
    p
}

fn nearest_root(e: &CircleExtension, y: CircleAngle, z: CircleAngle) -> u32 {
    let scaled = z.value() * f64::from(e.k()) - CircleExtension::root_offset(y.value());
    let r = crate::num::fract1(scaled / f64::from(e.k())) * f64::from(e.k());
    let idx = (r + 0.5) as u32;
    idx % e.k()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::point::{distance, SymbolicWord};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identifiers_round_trip_flavor() {
        assert_eq!(System::Shift(FullShift::new(2).unwrap()).identifier(), "full-shift:2");
        assert_eq!(System::Chacon(Chacon::with_level(4)).identifier(), "chacon");
        let odo = System::Odometer(Odometer::new(alloc::vec![2, 3, 2]).unwrap());
        assert_eq!(odo.identifier(), "odometer:2,3,2");
        let ext = System::CircleExtension(CircleExtension::new(3, DEFAULT_ALPHA).unwrap());
        assert_eq!(ext.identifier(), "circle-ext:k=3");
    }

    #[test]
    fn identity_fiber_skew_keeps_label() {
        let skew = System::Skew(crate::skew::SkewProduct::new(
            System::Shift(FullShift::new(2).unwrap()),
            crate::skew::FiniteCocycle::identity(
                2,
                crate::cell::CellPartition::symbol_window(2, 1).unwrap(),
            )
            .unwrap(),
        ));
        let x = Point::fibered(
            Point::Word(SymbolicWord::new(2, alloc::vec![0, 1, 1]).unwrap()),
            1,
        );
        let stepped = skew.step(&x).unwrap();
        assert_eq!(stepped.expect_fibered().unwrap().label, 1);
    }

    #[test]
    fn partner_candidates_respect_radius() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let chacon = System::Chacon(Chacon::with_level(9));
        let x = chacon.random_point(500, &mut rng).unwrap();
        let cands = chacon.partner_candidates(&x, 1.0 / 32.0, 8, &mut rng).unwrap();
        assert!(!cands.is_empty());
        for c in &cands {
            let d = distance(&x, c).unwrap();
            assert!(d < 1.0 / 32.0, "candidate at distance {d}");
        }
    }

    #[test]
    fn rotation_candidates_stay_close() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let rot = System::Rotation(Rotation::new(DEFAULT_ALPHA).unwrap());
        let x = rot.random_point(0, &mut rng).unwrap();
        for c in rot.partner_candidates(&x, 0.01, 5, &mut rng).unwrap() {
            assert!(distance(&x, &c).unwrap() < 0.01);
        }
    }

    #[test]
    fn product_step_is_componentwise() {
        let sys = System::product(
            System::Rotation(Rotation::new(0.25).unwrap()),
            System::Shift(FullShift::new(2).unwrap()),
        );
        let p = Point::product(
            Point::Circle(CircleAngle::new(0.5)),
            Point::Word(SymbolicWord::new(2, alloc::vec![1, 0]).unwrap()),
        );
        let s = sys.step(&p).unwrap();
        let pp = s.expect_product().unwrap();
        assert!((pp.left.expect_circle().unwrap().value() - 0.75).abs() < 1e-12);
        assert_eq!(pp.right.expect_word().unwrap().symbols(), &[0]);
    }

    #[test]
    fn kind_mismatch_is_reported() {
        let sys = System::Rotation(Rotation::new(0.25).unwrap());
        let w = Point::Word(SymbolicWord::new(2, alloc::vec![0]).unwrap());
        assert!(matches!(sys.step(&w), Err(Error::KindMismatch { .. })));
    }
}
