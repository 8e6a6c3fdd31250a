//! Lockstep pair orbits with an incremental distance fast path.
//!
//! Over symbolic bases, recomputing the first disagreement from scratch at
//! every step costs `O(depth)` per step in the worst case (engineered
//! proximal pairs agree for very long runs). The walker instead remembers
//! the next disagreement position on the orbit's absolute time axis and
//! rescans only when the orbit passes it, so a whole horizon scan costs
//! `O(depth + horizon)`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::num::pow2_neg;
use crate::point::{distance, Point, SymbolicWord};
use crate::systems::System;

#[derive(Debug, Clone)]
enum ScanState {
    Unscanned,
    MismatchAt(usize),
    CleanToEnd,
}

#[derive(Debug, Clone)]
struct FastState {
    x0: SymbolicWord,
    y0: SymbolicWord,
    shared_depth: usize,
    scan: ScanState,
}

impl FastState {
    fn new(x0: SymbolicWord, y0: SymbolicWord) -> Option<FastState> {
        if x0.alphabet_size() != y0.alphabet_size() {
            return None;
        }
        let shared_depth = x0.depth().min(y0.depth());
        Some(FastState { x0, y0, shared_depth, scan: ScanState::Unscanned })
    }

    /// Distance of the symbolic components at orbit time `t`.
    fn word_distance(&mut self, t: usize) -> Result<f64> {
        if t >= self.shared_depth {
            return Err(Error::DepthExhausted { needed: t + 1, available: self.shared_depth });
        }
        let fresh = match self.scan {
            ScanState::CleanToEnd => return Ok(0.0),
            ScanState::MismatchAt(q) if q >= t => return Ok(pow2_neg(q - t)),
            _ => {
                let xs = self.x0.symbols();
                let ys = self.y0.symbols();
                (t..self.shared_depth).find(|&q| xs[q] != ys[q])
            }
        };
        match fresh {
            Some(q) => {
                self.scan = ScanState::MismatchAt(q);
                Ok(pow2_neg(q - t))
            }
            None => {
                self.scan = ScanState::CleanToEnd;
                Ok(0.0)
            }
        }
    }
}

/// Steps a pair of points in lockstep under one system, exposing the
/// distance at each time.
pub struct PairWalker<'a> {
    system: &'a System,
    x: Point,
    y: Point,
    time: usize,
    fast: Option<FastState>,
}

impl<'a> PairWalker<'a> {
    pub fn new(system: &'a System, x: &Point, y: &Point) -> PairWalker<'a> {
        let fast = fast_state(system, x, y);
        PairWalker { system, x: x.clone(), y: y.clone(), time: 0, fast }
    }

    pub fn time(&self) -> usize {
        self.time
    }

    pub fn x(&self) -> &Point {
        &self.x
    }

    pub fn y(&self) -> &Point {
        &self.y
    }

    /// Distance between the current pair of points.
    pub fn distance(&mut self) -> Result<f64> {
        if let Some(fast) = &mut self.fast {
            let labels_differ = match (&self.x, &self.y) {
                (Point::Fibered(a), Point::Fibered(b)) => a.label != b.label,
                _ => false,
            };
            if labels_differ {
                // still must fail on exhausted depth rather than report 1.0
                if self.time >= fast.shared_depth {
                    return Err(Error::DepthExhausted {
                        needed: self.time + 1,
                        available: fast.shared_depth,
                    });
                }
                return Ok(1.0);
            }
            return fast.word_distance(self.time);
        }
        distance(&self.x, &self.y)
    }

    /// Advances both points one step.
    pub fn advance(&mut self) -> Result<()> {
        self.x = self.system.step(&self.x)?;
        self.y = self.system.step(&self.y)?;
        self.time += 1;
        Ok(())
    }
}

fn fast_state(system: &System, x: &Point, y: &Point) -> Option<FastState> {
    match (system, x, y) {
        (System::Shift(_) | System::Chacon(_), Point::Word(a), Point::Word(b)) => {
            FastState::new(a.clone(), b.clone())
        }
        (System::Skew(sk), Point::Fibered(a), Point::Fibered(b)) => {
            match (sk.base(), &a.base, &b.base) {
                (System::Shift(_) | System::Chacon(_), Point::Word(wa), Point::Word(wb)) => {
                    FastState::new(wa.clone(), wb.clone())
                }
                _ => None,
            }
        }
        _ => None,
    }
}

/// Distances `d(T^i x, T^i y)` for `i = 0..=n`.
pub(crate) fn pair_orbit_distances(
    system: &System,
    x: &Point,
    y: &Point,
    n: usize,
) -> Result<Vec<f64>> {
    for p in [x, y] {
        if let Some(depth) = p.min_depth() {
            if depth < n + 1 {
                return Err(Error::DepthExhausted { needed: n + 1, available: depth });
            }
        }
    }
    let mut walker = PairWalker::new(system, x, y);
    let mut out = Vec::with_capacity(n + 1);
    for i in 0..=n {
        out.push(walker.distance()?);
        if i < n {
            walker.advance()?;
        }
    }
    Ok(out)
}
