//! Finite nets of cells for orbit-coverage statistics.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::point::Point;
use crate::systems::System;

/// A finite decomposition of a system's space used to score orbit coverage.
/// Unlike cocycle partitions, net classification of circle points snaps
/// boundary cases instead of erroring; nets feed statistics, not dynamics.
#[derive(Debug, Clone)]
pub struct Net {
    kind: NetKind,
}

#[derive(Debug, Clone)]
enum NetKind {
    /// Length-`window` prefixes; `valid` restricts to the factors actually
    /// occurring in a subshift's language.
    Words { alphabet: u8, window: usize, valid: Option<BTreeMap<Vec<u8>, usize>> },
    Arcs { count: usize },
    Digits { bases: Vec<u32>, window: usize },
    Product { left: Box<Net>, right: Box<Net> },
    Labeled { base: Box<Net>, labels: usize },
}

impl Net {
    pub(crate) fn build(system: &System, resolution: usize) -> Result<Net> {
        if resolution == 0 {
            return Err(Error::InvalidPoint("net resolution must be positive"));
        }
        let kind = match system {
            System::Shift(s) => NetKind::Words {
                alphabet: s.alphabet_size(),
                window: resolution,
                valid: None,
            },
            System::Chacon(c) => {
                let mut factors: BTreeMap<Vec<u8>, usize> = BTreeMap::new();
                for win in c.word().windows(resolution) {
                    if !factors.contains_key(win) {
                        let next = factors.len();
                        factors.insert(win.to_vec(), next);
                    }
                }
                // reindex in sorted order for determinism
                let mut sorted: Vec<Vec<u8>> = factors.into_keys().collect();
                sorted.sort();
                let valid = sorted.into_iter().enumerate().map(|(i, w)| (w, i)).collect();
                NetKind::Words { alphabet: 2, window: resolution, valid: Some(valid) }
            }
            System::Rotation(_) => NetKind::Arcs { count: resolution },
            System::Odometer(o) => {
                if resolution > o.bases().len() {
                    return Err(Error::ResolutionTooFine {
                        needed: resolution,
                        digits: o.bases().len(),
                    });
                }
                NetKind::Digits { bases: o.bases().to_vec(), window: resolution }
            }
            System::CircleExtension(_) => NetKind::Product {
                left: Box::new(Net { kind: NetKind::Arcs { count: resolution } }),
                right: Box::new(Net { kind: NetKind::Arcs { count: resolution } }),
            },
            System::Product(l, r) => NetKind::Product {
                left: Box::new(Net::build(l, resolution)?),
                right: Box::new(Net::build(r, resolution)?),
            },
            System::Skew(sk) => NetKind::Labeled {
                base: Box::new(Net::build(sk.base(), resolution)?),
                labels: sk.cocycle().fiber_size(),
            },
            System::OdometerSkew(os) => {
                let window = resolution.min(os.fiber().bases().len());
                NetKind::Product {
                    left: Box::new(Net::build(os.base(), resolution)?),
                    right: Box::new(Net {
                        kind: NetKind::Digits { bases: os.fiber().bases().to_vec(), window },
                    }),
                }
            }
        };
        Ok(Net { kind })
    }

    pub fn cell_count(&self) -> usize {
        match &self.kind {
            NetKind::Words { alphabet, window, valid } => match valid {
                Some(map) => map.len(),
                None => (*alphabet as usize).pow(*window as u32),
            },
            NetKind::Arcs { count } => *count,
            NetKind::Digits { bases, window } => {
                bases[..*window].iter().map(|&b| b as usize).product()
            }
            NetKind::Product { left, right } => left.cell_count() * right.cell_count(),
            NetKind::Labeled { base, labels } => base.cell_count() * labels,
        }
    }

    pub fn index_of(&self, p: &Point) -> Result<usize> {
        match &self.kind {
            NetKind::Words { alphabet, window, valid } => {
                let w = p.expect_word()?;
                if w.depth() < *window {
                    return Err(Error::DepthExhausted { needed: *window, available: w.depth() });
                }
                let prefix = &w.symbols()[..*window];
                match valid {
                    Some(map) => map
                        .get(prefix)
                        .copied()
                        .ok_or(Error::InvalidPoint("window outside the subshift language")),
                    None => {
                        let mut idx = 0usize;
                        for &s in prefix {
                            idx = idx * (*alphabet as usize) + s as usize;
                        }
                        Ok(idx)
                    }
                }
            }
            NetKind::Arcs { count } => {
                let v = p.expect_circle()?.value();
                let idx = (v * *count as f64) as usize;
                Ok(idx.min(count - 1))
            }
            NetKind::Digits { bases, window } => {
                let d = p.expect_odometer()?;
                if d.is_poisoned() {
                    return Err(Error::Poisoned);
                }
                let mut idx = 0usize;
                for j in (0..*window).rev() {
                    idx = idx * bases[j] as usize + d.digits()[j] as usize;
                }
                Ok(idx)
            }
            NetKind::Product { left, right } => {
                let pp = p.expect_product()?;
                Ok(left.index_of(&pp.left)? * right.cell_count() + right.index_of(&pp.right)?)
            }
            NetKind::Labeled { base, labels } => {
                let fp = p.expect_fibered()?;
                if fp.label >= *labels {
                    return Err(Error::InvalidPoint("label outside fiber"));
                }
                Ok(base.index_of(&fp.base)? * labels + fp.label)
            }
        }
    }
}
