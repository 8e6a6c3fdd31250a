//! The odometer (adding machine) on a product of finite cyclic digit spaces.

use alloc::sync::Arc;
use alloc::vec::Vec;

use rand::RngCore;

use crate::error::{Error, Result};
use crate::num::pow2_neg;
use crate::point::OdometerDigits;

/// Add-1-with-carry on digit vectors bounded by `bases`. Minimal and an
/// isometry in the first-disagreement metric.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Odometer {
    bases: Arc<[u32]>,
}

impl Odometer {
    pub fn new(bases: Vec<u32>) -> Result<Self> {
        if bases.is_empty() {
            return Err(Error::InvalidPoint("empty bases vector"));
        }
        if bases.iter().any(|&b| b < 2) {
            return Err(Error::InvalidPoint("every base must be at least 2"));
        }
        Ok(Odometer { bases: bases.into() })
    }

    /// Dyadic odometer with `digits` positions.
    pub fn dyadic(digits: usize) -> Self {
        Odometer { bases: alloc::vec![2; digits].into() }
    }

    pub fn bases(&self) -> &[u32] {
        &self.bases
    }

    pub fn shared_bases(&self) -> Arc<[u32]> {
        self.bases.clone()
    }

    pub fn zero(&self) -> OdometerDigits {
        OdometerDigits::zero(self.bases.clone()).expect("bases validated at construction")
    }

    pub fn step(&self, p: &OdometerDigits) -> Result<OdometerDigits> {
        if p.bases() != &self.bases[..] {
            return Err(Error::Incompatible("point bases differ from odometer"));
        }
        p.successor()
    }

    pub fn random_point(&self, rng: &mut dyn RngCore) -> OdometerDigits {
        let digits: Vec<u32> = self.bases.iter().map(|&b| rng.next_u32() % b).collect();
        OdometerDigits::new(self.bases.clone(), digits).expect("digits within bases")
    }

    /// The return period for closeness `delta`: the product
    /// `m = p_1 ⋯ p_J'` over the minimal `J'` with `2^-J' < delta`. After any
    /// multiple of `m` steps the first `J'` digits have completed whole
    /// cycles, so every point is back within `2^-J'` (hence within `delta`)
    /// of where it started.
    pub fn return_period(&self, delta: f64) -> Result<u64> {
        if !(delta > 0.0) {
            return Err(Error::InvalidPoint("delta must be positive"));
        }
        let mut needed = 0usize;
        while pow2_neg(needed) >= delta {
            needed += 1;
            if needed > self.bases.len() {
                return Err(Error::ResolutionTooFine {
                    needed,
                    digits: self.bases.len(),
                });
            }
        }
        Ok(self.bases[..needed].iter().map(|&b| u64::from(b)).product())
    }
}
