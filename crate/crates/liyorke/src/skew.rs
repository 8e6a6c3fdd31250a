//! Skew-product combinators over arbitrary bases: finite-fiber permutation
//! cocycles, odometer-or-identity fibers, and the fiber-orbit decomposition
//! that locates candidate minimal sets.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::cell::CellPartition;
use crate::error::{Error, Result};
use crate::perm::Perm;
use crate::point::{FiberedPoint, Point, ProductPoint};
use crate::systems::{Odometer, System};

/// A cocycle constant on each cell of a finite clopen partition: one
/// permutation of the fiber per cell. Continuity is automatic because the
/// cells are cylinders (or arcs, where boundary points are refused rather
/// than guessed).
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteCocycle {
    fiber_size: usize,
    cells: CellPartition,
    perms: Vec<Perm>,
}

impl FiniteCocycle {
    pub fn new(fiber_size: usize, cells: CellPartition, perms: Vec<Perm>) -> Result<Self> {
        if fiber_size == 0 {
            return Err(Error::InvalidPoint("fiber must be nonempty"));
        }
        if perms.len() != cells.cell_count() {
            return Err(Error::InvalidPoint("need exactly one permutation per cell"));
        }
        if perms.iter().any(|p| p.size() != fiber_size) {
            return Err(Error::InvalidPoint("permutation size differs from fiber size"));
        }
        Ok(FiniteCocycle { fiber_size, cells, perms })
    }

    /// Identity on every cell.
    pub fn identity(fiber_size: usize, cells: CellPartition) -> Result<Self> {
        let n = cells.cell_count();
        Self::new(fiber_size, cells, alloc::vec![Perm::identity(fiber_size); n])
    }

    /// The same permutation on every cell.
    pub fn constant(perm: Perm, cells: CellPartition) -> Result<Self> {
        let n = cells.cell_count();
        Self::new(perm.size(), cells, alloc::vec![perm; n])
    }

    /// Two-point fiber swapped exactly when the leading symbol equals
    /// `symbol`; the stock order-2 cocycle over symbolic bases.
    pub fn swap_on_symbol(alphabet_size: u8, symbol: u8) -> Result<Self> {
        if symbol >= alphabet_size {
            return Err(Error::InvalidPoint("trigger symbol outside alphabet"));
        }
        let cells = CellPartition::symbol_window(alphabet_size, 1)?;
        let swap = Perm::from_cycles(2, &[&[0, 1]])?;
        let perms = (0..alphabet_size)
            .map(|s| if s == symbol { swap.clone() } else { Perm::identity(2) })
            .collect();
        Self::new(2, cells, perms)
    }

    pub fn fiber_size(&self) -> usize {
        self.fiber_size
    }

    pub fn cells(&self) -> &CellPartition {
        &self.cells
    }

    pub fn perms(&self) -> &[Perm] {
        &self.perms
    }

    /// The fiber map acting at the given base point.
    pub fn perm_for(&self, base: &Point) -> Result<&Perm> {
        Ok(&self.perms[self.cells.classify(base)?])
    }

    /// The composition `G_{x_{i-1}} ∘ ⋯ ∘ G_{x_0}` along the first `steps`
    /// base steps; the empty composition is the identity.
    pub fn compose_along(&self, base: &System, x: &Point, steps: usize) -> Result<Perm> {
        let mut acc = Perm::identity(self.fiber_size);
        let mut cur = x.clone();
        for _ in 0..steps {
            acc = self.perm_for(&cur)?.compose(&acc);
            cur = base.step(&cur)?;
        }
        Ok(acc)
    }
}

/// Skew product `(t, a) -> (T t, G_t a)` with a finite fiber.
#[derive(Debug, Clone)]
pub struct SkewProduct {
    base: Box<System>,
    cocycle: FiniteCocycle,
}

impl SkewProduct {
    pub fn new(base: System, cocycle: FiniteCocycle) -> Self {
        SkewProduct { base: Box::new(base), cocycle }
    }

    pub fn base(&self) -> &System {
        &self.base
    }

    pub fn cocycle(&self) -> &FiniteCocycle {
        &self.cocycle
    }

    pub fn step(&self, p: &FiberedPoint) -> Result<Point> {
        if p.label >= self.cocycle.fiber_size() {
            return Err(Error::InvalidPoint("label outside fiber"));
        }
        let perm = self.cocycle.perm_for(&p.base)?;
        Ok(Point::fibered(self.base.step(&p.base)?, perm.apply(p.label)))
    }
}

/// Per-cell choice for an odometer fiber.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FiberAction {
    /// Apply the odometer step to the fiber.
    Advance,
    /// Leave the fiber fixed.
    Hold,
}

/// Cell-by-cell selection between the odometer step and the identity on the
/// fiber.
#[derive(Debug, Clone, PartialEq)]
pub struct OdometerFiberSelector {
    cells: CellPartition,
    actions: Vec<FiberAction>,
}

impl OdometerFiberSelector {
    pub fn new(cells: CellPartition, actions: Vec<FiberAction>) -> Result<Self> {
        if actions.len() != cells.cell_count() {
            return Err(Error::InvalidPoint("need exactly one action per cell"));
        }
        Ok(OdometerFiberSelector { cells, actions })
    }

    pub fn uniform(cells: CellPartition, action: FiberAction) -> Self {
        let n = cells.cell_count();
        OdometerFiberSelector { cells, actions: alloc::vec![action; n] }
    }

    pub fn cells(&self) -> &CellPartition {
        &self.cells
    }

    pub fn actions(&self) -> &[FiberAction] {
        &self.actions
    }

    pub fn action_for(&self, base: &Point) -> Result<FiberAction> {
        Ok(self.actions[self.cells.classify(base)?])
    }
}

/// Skew product `(x, y) -> (T x, R_x y)` where each `R_x` is the odometer
/// step or the identity, selected by the base cell.
#[derive(Debug, Clone)]
pub struct OdometerSkew {
    base: Box<System>,
    fiber: Odometer,
    selector: OdometerFiberSelector,
}

impl OdometerSkew {
    pub fn new(base: System, fiber: Odometer, selector: OdometerFiberSelector) -> Self {
        OdometerSkew { base: Box::new(base), fiber, selector }
    }

    pub fn base(&self) -> &System {
        &self.base
    }

    pub fn fiber(&self) -> &Odometer {
        &self.fiber
    }

    pub fn selector(&self) -> &OdometerFiberSelector {
        &self.selector
    }

    pub fn step(&self, p: &ProductPoint) -> Result<Point> {
        let digits = p.right.expect_odometer()?;
        if digits.is_poisoned() {
            return Err(Error::Poisoned);
        }
        let next_fiber = match self.selector.action_for(&p.left)? {
            FiberAction::Advance => self.fiber.step(digits)?,
            FiberAction::Hold => digits.clone(),
        };
        Ok(Point::product(self.base.step(&p.left)?, Point::Odometer(next_fiber)))
    }
}

/// Breadth-first closure of the group generated by the cocycle's cell
/// permutations. Exact; bounded to small fibers where the closure stays
/// desk-sized.
pub fn generated_group(cocycle: &FiniteCocycle) -> Result<Vec<Perm>> {
    if cocycle.fiber_size() > 8 {
        return Err(Error::Unsupported("exact group closure is limited to fibers of size <= 8"));
    }
    let mut group: BTreeSet<Perm> = BTreeSet::new();
    let mut frontier: Vec<Perm> = alloc::vec![Perm::identity(cocycle.fiber_size())];
    group.insert(frontier[0].clone());
    while let Some(g) = frontier.pop() {
        for generator in cocycle.perms() {
            let next = generator.compose(&g);
            if group.insert(next.clone()) {
                frontier.push(next);
            }
        }
    }
    Ok(group.into_iter().collect())
}

/// Orbits of the generated group on the fiber labels. Each orbit is a
/// candidate fiber set `B` of a minimal set `X × B` of the skew product,
/// exact when the base is minimal and every cell is visited.
pub fn minimal_fiber_orbits(cocycle: &FiniteCocycle) -> Result<Vec<Vec<usize>>> {
    let group = generated_group(cocycle)?;
    let m = cocycle.fiber_size();
    let mut seen = alloc::vec![false; m];
    let mut orbits = Vec::new();
    for start in 0..m {
        if seen[start] {
            continue;
        }
        let mut orbit: BTreeSet<usize> = BTreeSet::new();
        for g in &group {
            orbit.insert(g.apply(start));
        }
        for &v in &orbit {
            seen[v] = true;
        }
        orbits.push(orbit.into_iter().collect());
    }
    Ok(orbits)
}
