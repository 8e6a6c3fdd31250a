//! Clopen cells and finite partitions of base spaces.
//!
//! Cocycles and hitting-time experiments address the base space through
//! cells: cylinders over symbolic spaces, half-open arcs over the circle,
//! digit prefixes over odometer spaces. Membership is decided from a point's
//! trusted data or not at all.

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::point::Point;

/// Points closer than this to an arc boundary are refused classification.
/// The circle has no clopen decompositions; the mismatch is surfaced
/// instead of hidden.
pub const ARC_BOUNDARY_TOL: f64 = 1e-9;

/// A single addressable subset of a base space.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    /// Symbolic points starting with the given symbols; for odometer points,
    /// digit prefixes (values below 256).
    Cylinder(Vec<u8>),
    /// Half-open arc `[lo, hi)` of the circle, endpoints in `[0, 1)`;
    /// wraps when `hi < lo`.
    Arc { lo: f64, hi: f64 },
    /// The whole space.
    Whole,
}

impl Cell {
    pub fn cylinder(symbols: &[u8]) -> Cell {
        Cell::Cylinder(symbols.to_vec())
    }

    /// Whether `p` lies in the cell; errors on insufficient depth or a
    /// boundary-ambiguous circle point.
    pub fn contains(&self, p: &Point) -> Result<bool> {
        match self {
            Cell::Whole => Ok(true),
            Cell::Cylinder(prefix) => match p {
                Point::Word(w) => {
                    if w.depth() < prefix.len() {
                        return Err(Error::DepthExhausted {
                            needed: prefix.len(),
                            available: w.depth(),
                        });
                    }
                    Ok(w.symbols()[..prefix.len()] == prefix[..])
                }
                Point::Odometer(d) => {
                    if d.is_poisoned() {
                        return Err(Error::Poisoned);
                    }
                    if d.digits().len() < prefix.len() {
                        return Err(Error::Incompatible("cell prefix longer than digit vector"));
                    }
                    Ok(d.digits()
                        .iter()
                        .zip(prefix.iter())
                        .all(|(&dig, &pre)| dig == u32::from(pre)))
                }
                Point::Fibered(fp) => self.contains(&fp.base),
                other => Err(Error::KindMismatch { left: "word", right: other.kind() }),
            },
            Cell::Arc { lo, hi } => {
                let v = p.expect_circle()?.value();
                if (v - lo).abs() < ARC_BOUNDARY_TOL || (v - hi).abs() < ARC_BOUNDARY_TOL {
                    return Err(Error::UndecidableCell);
                }
                Ok(if lo <= hi { *lo <= v && v < *hi } else { v >= *lo || v < *hi })
            }
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Cell::Whole => String::from("whole"),
            Cell::Cylinder(sym) => {
                let mut s = String::from("cyl:");
                for &d in sym {
                    // symbols above 9 are rare at desk scale; separate them
                    if d < 10 {
                        s.push((b'0' + d) as char);
                    } else {
                        s.push('(');
                        push_usize(&mut s, d as usize);
                        s.push(')');
                    }
                }
                s
            }
            Cell::Arc { lo, hi } => {
                let mut s = String::from("arc:");
                push_f64(&mut s, *lo);
                s.push(',');
                push_f64(&mut s, *hi);
                s
            }
        }
    }
}

fn push_usize(s: &mut String, v: usize) {
    use core::fmt::Write;
    let _ = write!(s, "{v}");
}

fn push_f64(s: &mut String, v: f64) {
    use core::fmt::Write;
    let _ = write!(s, "{v}");
}

/// A finite partition of a base space into cells; every point belongs to
/// exactly one cell, or membership is declared undecidable.
#[derive(Debug, Clone, PartialEq)]
pub enum CellPartition {
    /// All words of the given length over the alphabet; the cell index is
    /// the base-`alphabet_size` value of the prefix.
    SymbolWindow { alphabet_size: u8, window: usize },
    /// Half-open arcs split at sorted boundaries within `[0, 1)`; cell `i`
    /// spans `[boundaries[i], boundaries[i+1])`, the last one wrapping.
    Arcs { boundaries: Vec<f64> },
    /// All digit prefixes of the given length over the odometer bases.
    DigitWindow { bases: Vec<u32>, window: usize },
}

impl CellPartition {
    pub fn symbol_window(alphabet_size: u8, window: usize) -> Result<Self> {
        if alphabet_size < 2 {
            return Err(Error::InvalidPoint("alphabet size must be at least 2"));
        }
        if window == 0 {
            return Err(Error::InvalidPoint("window must be positive"));
        }
        if (alphabet_size as u64).pow(window as u32) > 1 << 20 {
            return Err(Error::InvalidPoint("cell count too large"));
        }
        Ok(CellPartition::SymbolWindow { alphabet_size, window })
    }

    pub fn arcs(boundaries: Vec<f64>) -> Result<Self> {
        if boundaries.len() < 2 {
            return Err(Error::InvalidPoint("need at least two arc boundaries"));
        }
        if boundaries.windows(2).any(|w| w[0] >= w[1])
            || boundaries.iter().any(|&b| !(0.0..1.0).contains(&b))
        {
            return Err(Error::InvalidPoint("arc boundaries must be sorted within [0,1)"));
        }
        Ok(CellPartition::Arcs { boundaries })
    }

    pub fn digit_window(bases: Vec<u32>, window: usize) -> Result<Self> {
        if window == 0 || window > bases.len() {
            return Err(Error::InvalidPoint("digit window outside bases vector"));
        }
        Ok(CellPartition::DigitWindow { bases, window })
    }

    pub fn cell_count(&self) -> usize {
        match self {
            CellPartition::SymbolWindow { alphabet_size, window } => {
                (*alphabet_size as usize).pow(*window as u32)
            }
            CellPartition::Arcs { boundaries } => boundaries.len(),
            CellPartition::DigitWindow { bases, window } => {
                bases[..*window].iter().map(|&b| b as usize).product()
            }
        }
    }

    /// Index of the cell containing `p`.
    pub fn classify(&self, p: &Point) -> Result<usize> {
        match self {
            CellPartition::SymbolWindow { alphabet_size, window } => {
                let w = p.expect_word()?;
                if w.alphabet_size() != *alphabet_size {
                    return Err(Error::Incompatible("alphabet size differs from partition"));
                }
                if w.depth() < *window {
                    return Err(Error::DepthExhausted { needed: *window, available: w.depth() });
                }
                let mut idx = 0usize;
                for &s in &w.symbols()[..*window] {
                    idx = idx * (*alphabet_size as usize) + s as usize;
                }
                Ok(idx)
            }
            CellPartition::Arcs { boundaries } => {
                let v = p.expect_circle()?.value();
                for &b in boundaries {
                    if (v - b).abs() < ARC_BOUNDARY_TOL {
                        return Err(Error::UndecidableCell);
                    }
                }
                // wrap distance to boundary 0 via 1.0 as well
                if (v - 1.0).abs() < ARC_BOUNDARY_TOL && boundaries[0] == 0.0 {
                    return Err(Error::UndecidableCell);
                }
                match boundaries.iter().rposition(|&b| b <= v) {
                    Some(i) => Ok(i),
                    // below the first boundary: wrapping part of the last arc
                    None => Ok(boundaries.len() - 1),
                }
            }
            CellPartition::DigitWindow { bases, window } => {
                let d = p.expect_odometer()?;
                if d.is_poisoned() {
                    return Err(Error::Poisoned);
                }
                if d.bases() != &bases[..] {
                    return Err(Error::Incompatible("odometer bases differ from partition"));
                }
                let mut idx = 0usize;
                for j in (0..*window).rev() {
                    idx = idx * bases[j] as usize + d.digits()[j] as usize;
                }
                Ok(idx)
            }
        }
    }

    /// The cell with the given index, as a standalone descriptor.
    pub fn cell(&self, index: usize) -> Result<Cell> {
        if index >= self.cell_count() {
            return Err(Error::InvalidPoint("cell index out of range"));
        }
        match self {
            CellPartition::SymbolWindow { alphabet_size, window } => {
                let mut sym = alloc::vec![0u8; *window];
                let mut v = index;
                for j in (0..*window).rev() {
                    sym[j] = (v % *alphabet_size as usize) as u8;
                    v /= *alphabet_size as usize;
                }
                Ok(Cell::Cylinder(sym))
            }
            CellPartition::Arcs { boundaries } => {
                let lo = boundaries[index];
                let hi = if index + 1 < boundaries.len() { boundaries[index + 1] } else { boundaries[0] };
                Ok(Cell::Arc { lo, hi })
            }
            CellPartition::DigitWindow { bases, window } => {
                let mut sym = alloc::vec![0u8; *window];
                let mut v = index;
                for j in 0..*window {
                    sym[j] = (v % bases[j] as usize) as u8;
                    v /= bases[j] as usize;
                }
                Ok(Cell::Cylinder(sym))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::point::{CircleAngle, SymbolicWord};

    #[test]
    fn symbol_window_classifies_by_prefix() {
        let part = CellPartition::symbol_window(2, 2).unwrap();
        assert_eq!(part.cell_count(), 4);
        let w = SymbolicWord::new(2, alloc::vec![1, 0, 1]).unwrap();
        assert_eq!(part.classify(&Point::Word(w)).unwrap(), 2);
        let shallow = SymbolicWord::new(2, alloc::vec![1]).unwrap();
        assert!(matches!(
            part.classify(&Point::Word(shallow)),
            Err(Error::DepthExhausted { .. })
        ));
    }

    #[test]
    fn cell_roundtrip() {
        let part = CellPartition::symbol_window(2, 2).unwrap();
        for i in 0..4 {
            let cell = part.cell(i).unwrap();
            if let Cell::Cylinder(sym) = &cell {
                let w = SymbolicWord::new(2, sym.clone()).unwrap();
                assert_eq!(part.classify(&Point::Word(w)).unwrap(), i);
            } else {
                panic!("expected cylinder");
            }
        }
    }

    #[test]
    fn arcs_classify_and_refuse_boundaries() {
        let part = CellPartition::arcs(alloc::vec![0.0, 0.5]).unwrap();
        let a = Point::Circle(CircleAngle::new(0.25));
        let b = Point::Circle(CircleAngle::new(0.75));
        assert_eq!(part.classify(&a).unwrap(), 0);
        assert_eq!(part.classify(&b).unwrap(), 1);
        let edge = Point::Circle(CircleAngle::new(0.5 + 1e-12));
        assert_eq!(part.classify(&edge), Err(Error::UndecidableCell));
    }

    #[test]
    fn digit_window_matches_odometer_order() {
        let part = CellPartition::digit_window(alloc::vec![2, 3], 2).unwrap();
        assert_eq!(part.cell_count(), 6);
        let bases: alloc::sync::Arc<[u32]> = alloc::vec![2, 3].into();
        let p = crate::point::OdometerDigits::new(bases, alloc::vec![1, 2]).unwrap();
        assert_eq!(part.classify(&Point::Odometer(p)).unwrap(), 2 * 2 + 1);
    }

    #[test]
    fn whole_cell_contains_everything() {
        assert!(Cell::Whole.contains(&Point::Circle(CircleAngle::new(0.1))).unwrap());
    }
}
