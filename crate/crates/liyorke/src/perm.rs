//! Permutations of a finite fiber and the pairs recorded along orbits.

use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Permutation of `{0, .., m-1}`, stored as its image table.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Perm {
    images: Vec<u8>,
}

impl Perm {
    pub fn identity(size: usize) -> Perm {
        Perm { images: (0..size as u8).collect() }
    }

    /// Validates that the table is a bijection.
    pub fn from_images(images: Vec<u8>) -> Result<Perm> {
        let m = images.len();
        if m == 0 || m > 64 {
            return Err(Error::InvalidPoint("fiber size must be within 1..=64"));
        }
        let mut seen = alloc::vec![false; m];
        for &i in &images {
            if (i as usize) >= m || seen[i as usize] {
                return Err(Error::InvalidPoint("permutation table is not a bijection"));
            }
            seen[i as usize] = true;
        }
        Ok(Perm { images })
    }

    /// Builds the permutation from disjoint cycles, e.g. `[[0, 1]]` for a swap.
    pub fn from_cycles(size: usize, cycles: &[&[u8]]) -> Result<Perm> {
        let mut images: Vec<u8> = (0..size as u8).collect();
        for cycle in cycles {
            for (i, &a) in cycle.iter().enumerate() {
                let b = cycle[(i + 1) % cycle.len()];
                if a as usize >= size || b as usize >= size {
                    return Err(Error::InvalidPoint("cycle entry outside fiber"));
                }
                images[a as usize] = b;
            }
        }
        Perm::from_images(images)
    }

    pub fn size(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, a: usize) -> usize {
        self.images[a] as usize
    }

    pub fn images(&self) -> &[u8] {
        &self.images
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.size(), other.size());
        Perm { images: other.images.iter().map(|&a| self.images[a as usize]).collect() }
    }

    pub fn inverse(&self) -> Perm {
        let mut images = alloc::vec![0u8; self.images.len()];
        for (i, &v) in self.images.iter().enumerate() {
            images[v as usize] = i as u8;
        }
        Perm { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| i == v as usize)
    }

    pub fn pow(&self, n: usize) -> Perm {
        let mut acc = Perm::identity(self.size());
        for _ in 0..n {
            acc = self.compose(&acc);
        }
        acc
    }
}

/// The pair `(g, h)` of fiber maps composed along the two coordinates of a
/// pair orbit: `g` along the first point's base orbit, `h` along the second's.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CocycleElement {
    pub x_map: Perm,
    pub y_map: Perm,
}

impl CocycleElement {
    pub fn identity(size: usize) -> CocycleElement {
        CocycleElement { x_map: Perm::identity(size), y_map: Perm::identity(size) }
    }

    /// Componentwise `self ∘ other`.
    pub fn compose(&self, other: &CocycleElement) -> CocycleElement {
        CocycleElement {
            x_map: self.x_map.compose(&other.x_map),
            y_map: self.y_map.compose(&other.y_map),
        }
    }

    pub fn inverse(&self) -> CocycleElement {
        CocycleElement { x_map: self.x_map.inverse(), y_map: self.y_map.inverse() }
    }

    pub fn is_identity(&self) -> bool {
        self.x_map.is_identity() && self.y_map.is_identity()
    }
}
