//! Point representations and the metric.
//!
//! Infinite points are represented by finite truncations with explicit depth
//! budgets. A symbolic point loses one trusted symbol per shift; once its
//! budget is spent, comparisons error out instead of returning junk.
//! Distance `0` means "indistinguishable at this precision", not
//! mathematical equality.

use alloc::boxed::Box;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::num::pow2_neg;

/// Truncated point of a subshift: a window of symbols with a trusted length.
///
/// The metric is `2^-j` where `j` is the first index of disagreement
/// (0-based); two words agreeing over their full shared depth are at
/// distance 0.
#[derive(Debug, Clone)]
pub struct SymbolicWord {
    alphabet_size: u8,
    backing: Arc<[u8]>,
    offset: usize,
    depth: usize,
}

/// Words are equal when their trusted windows agree; the backing storage is
/// irrelevant.
impl PartialEq for SymbolicWord {
    fn eq(&self, other: &Self) -> bool {
        self.alphabet_size == other.alphabet_size && self.symbols() == other.symbols()
    }
}

impl Eq for SymbolicWord {}

impl SymbolicWord {
    /// Build a word from owned digits; the whole length is trusted.
    pub fn new(alphabet_size: u8, digits: Vec<u8>) -> Result<Self> {
        let depth = digits.len();
        Self::with_depth(alphabet_size, digits, depth)
    }

    /// Build a word trusting only the first `depth` digits.
    pub fn with_depth(alphabet_size: u8, digits: Vec<u8>, depth: usize) -> Result<Self> {
        if alphabet_size < 2 {
            return Err(Error::InvalidPoint("alphabet size must be at least 2"));
        }
        if depth > digits.len() {
            return Err(Error::InvalidPoint("depth exceeds digit count"));
        }
        if digits.iter().any(|&d| d >= alphabet_size) {
            return Err(Error::InvalidPoint("digit outside alphabet"));
        }
        Ok(SymbolicWord { alphabet_size, backing: digits.into(), offset: 0, depth })
    }

    /// A window into shared backing storage; used by subshift caches so
    /// points and shifts are O(1).
    pub(crate) fn from_shared(
        alphabet_size: u8,
        backing: Arc<[u8]>,
        offset: usize,
        depth: usize,
    ) -> Result<Self> {
        if offset + depth > backing.len() {
            return Err(Error::InvalidPoint("window exceeds backing storage"));
        }
        Ok(SymbolicWord { alphabet_size, backing, offset, depth })
    }

    pub fn alphabet_size(&self) -> u8 {
        self.alphabet_size
    }

    /// Number of still-trusted leading symbols.
    pub fn depth(&self) -> usize {
        self.depth
    }

    /// The trusted symbols.
    pub fn symbols(&self) -> &[u8] {
        &self.backing[self.offset..self.offset + self.depth]
    }

    pub fn symbol(&self, i: usize) -> Result<u8> {
        if i >= self.depth {
            return Err(Error::DepthExhausted { needed: i + 1, available: self.depth });
        }
        Ok(self.backing[self.offset + i])
    }

    /// Left shift; consumes one unit of depth.
    pub fn shift(&self) -> Result<Self> {
        if self.depth == 0 {
            return Err(Error::DepthExhausted { needed: 1, available: 0 });
        }
        Ok(SymbolicWord {
            alphabet_size: self.alphabet_size,
            backing: self.backing.clone(),
            offset: self.offset + 1,
            depth: self.depth - 1,
        })
    }

    /// First index (0-based) where the words disagree, scanning the shared
    /// trusted depth; `None` when they agree throughout it.
    pub fn first_disagreement(&self, other: &Self) -> Result<Option<usize>> {
        if self.alphabet_size != other.alphabet_size {
            return Err(Error::Incompatible("alphabet sizes differ"));
        }
        let shared = self.depth.min(other.depth);
        if shared == 0 {
            return Err(Error::DepthExhausted { needed: 1, available: 0 });
        }
        let a = &self.backing[self.offset..self.offset + shared];
        let b = &other.backing[other.offset..other.offset + shared];
        Ok(a.iter().zip(b).position(|(x, y)| x != y))
    }
}

/// Position on the unit circle as a fraction of a full turn, in `[0, 1)`.
/// Distance is arc length, bounded by 1/2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleAngle {
    turns: f64,
}

impl CircleAngle {
    /// Reduces modulo 1.
    pub fn new(turns: f64) -> Self {
        CircleAngle { turns: crate::num::fract1(turns) }
    }

    pub fn value(self) -> f64 {
        self.turns
    }

    pub fn rotate(self, delta: f64) -> Self {
        CircleAngle::new(self.turns + delta)
    }

    pub fn arc_distance(self, other: Self) -> f64 {
        let d = self.turns - other.turns;
        let d = if d < 0.0 { -d } else { d };
        d.min(1.0 - d)
    }
}

/// Truncated point of a product of finite cyclic digit spaces.
///
/// Digits are listed least-significant first; `bases[j]` bounds `digits[j]`.
/// A carry propagating past the last digit sets the overflow flag, which
/// poisons the point: distance queries against it are errors. Deep enough
/// bases vectors make overflow unreachable at desk horizons.
#[derive(Debug, Clone, PartialEq)]
pub struct OdometerDigits {
    bases: Arc<[u32]>,
    digits: Vec<u32>,
    overflow: bool,
}

impl OdometerDigits {
    pub fn new(bases: Arc<[u32]>, digits: Vec<u32>) -> Result<Self> {
        if bases.is_empty() {
            return Err(Error::InvalidPoint("empty bases vector"));
        }
        if bases.iter().any(|&b| b < 2) {
            return Err(Error::InvalidPoint("every base must be at least 2"));
        }
        if digits.len() != bases.len() {
            return Err(Error::InvalidPoint("digit count differs from bases count"));
        }
        if digits.iter().zip(bases.iter()).any(|(&d, &b)| d >= b) {
            return Err(Error::InvalidPoint("digit outside its base"));
        }
        Ok(OdometerDigits { bases, digits, overflow: false })
    }

    pub fn zero(bases: Arc<[u32]>) -> Result<Self> {
        let n = bases.len();
        Self::new(bases, alloc::vec![0; n])
    }

    pub fn bases(&self) -> &[u32] {
        &self.bases
    }

    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    pub fn is_poisoned(&self) -> bool {
        self.overflow
    }

    /// Add one with carry, left to right. Sets the overflow flag if the
    /// carry exits the last position.
    pub fn successor(&self) -> Result<Self> {
        if self.overflow {
            return Err(Error::Poisoned);
        }
        let mut digits = self.digits.clone();
        let mut overflow = true;
        for (d, &b) in digits.iter_mut().zip(self.bases.iter()) {
            *d += 1;
            if *d < b {
                overflow = false;
                break;
            }
            *d = 0;
        }
        Ok(OdometerDigits { bases: self.bases.clone(), digits, overflow })
    }

    /// First position (0-based) where the digit vectors disagree.
    pub fn first_disagreement(&self, other: &Self) -> Result<Option<usize>> {
        if self.overflow || other.overflow {
            return Err(Error::Poisoned);
        }
        if *self.bases != *other.bases {
            return Err(Error::Incompatible("odometer bases differ"));
        }
        Ok(self.digits.iter().zip(&other.digits).position(|(a, b)| a != b))
    }
}

/// Pair of points under the max-metric.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductPoint {
    pub left: Point,
    pub right: Point,
}

/// Base point with a label in a finite fiber `{0, .., m-1}`; the fiber
/// carries the discrete metric.
#[derive(Debug, Clone, PartialEq)]
pub struct FiberedPoint {
    pub base: Point,
    pub label: usize,
}

/// Any point the laboratory knows how to move and measure.
#[derive(Debug, Clone, PartialEq)]
pub enum Point {
    Word(SymbolicWord),
    Circle(CircleAngle),
    Odometer(OdometerDigits),
    Product(Box<ProductPoint>),
    Fibered(Box<FiberedPoint>),
}

impl Point {
    pub fn kind(&self) -> &'static str {
        match self {
            Point::Word(_) => "word",
            Point::Circle(_) => "circle",
            Point::Odometer(_) => "odometer",
            Point::Product(_) => "product",
            Point::Fibered(_) => "fibered",
        }
    }

    pub fn product(left: Point, right: Point) -> Point {
        Point::Product(Box::new(ProductPoint { left, right }))
    }

    pub fn fibered(base: Point, label: usize) -> Point {
        Point::Fibered(Box::new(FiberedPoint { base, label }))
    }

    /// Remaining trusted depth of the shallowest symbolic component;
    /// `None` when no component is depth-budgeted.
    pub fn min_depth(&self) -> Option<usize> {
        match self {
            Point::Word(w) => Some(w.depth()),
            Point::Circle(_) | Point::Odometer(_) => None,
            Point::Product(p) => match (p.left.min_depth(), p.right.min_depth()) {
                (Some(a), Some(b)) => Some(a.min(b)),
                (Some(a), None) | (None, Some(a)) => Some(a),
                (None, None) => None,
            },
            Point::Fibered(fp) => fp.base.min_depth(),
        }
    }

    pub(crate) fn expect_word(&self) -> Result<&SymbolicWord> {
        match self {
            Point::Word(w) => Ok(w),
            other => Err(Error::KindMismatch { left: "word", right: other.kind() }),
        }
    }

    pub(crate) fn expect_circle(&self) -> Result<&CircleAngle> {
        match self {
            Point::Circle(a) => Ok(a),
            other => Err(Error::KindMismatch { left: "circle", right: other.kind() }),
        }
    }

    pub(crate) fn expect_odometer(&self) -> Result<&OdometerDigits> {
        match self {
            Point::Odometer(d) => Ok(d),
            other => Err(Error::KindMismatch { left: "odometer", right: other.kind() }),
        }
    }

    pub(crate) fn expect_product(&self) -> Result<&ProductPoint> {
        match self {
            Point::Product(p) => Ok(p),
            other => Err(Error::KindMismatch { left: "product", right: other.kind() }),
        }
    }

    pub(crate) fn expect_fibered(&self) -> Result<&FiberedPoint> {
        match self {
            Point::Fibered(fp) => Ok(fp),
            other => Err(Error::KindMismatch { left: "fibered", right: other.kind() }),
        }
    }
}

/// Distance between two points of the same kind.
///
/// Symbolic and odometer points use the first-disagreement metric `2^-j`
/// (0-based index for words, 1-based for odometer digits); products and
/// fibered points use the max-metric; circle points use arc length.
pub fn distance(p: &Point, q: &Point) -> Result<f64> {
    match (p, q) {
        (Point::Word(a), Point::Word(b)) => {
            Ok(match a.first_disagreement(b)? {
                Some(j) => pow2_neg(j),
                None => 0.0,
            })
        }
        (Point::Circle(a), Point::Circle(b)) => Ok(a.arc_distance(*b)),
        (Point::Odometer(a), Point::Odometer(b)) => {
            Ok(match a.first_disagreement(b)? {
                Some(j) => pow2_neg(j + 1),
                None => 0.0,
            })
        }
        (Point::Product(a), Point::Product(b)) => {
            let dl = distance(&a.left, &b.left)?;
            let dr = distance(&a.right, &b.right)?;
            Ok(dl.max(dr))
        }
        (Point::Fibered(a), Point::Fibered(b)) => {
            let db = distance(&a.base, &b.base)?;
            Ok(if a.label == b.label { db } else { 1.0 })
        }
        _ => Err(Error::KindMismatch { left: p.kind(), right: q.kind() }),
    }
}
