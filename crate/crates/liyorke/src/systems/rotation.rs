//! Irrational rotation of the circle.

use rand::RngCore;

use crate::error::{Error, Result};
use crate::point::CircleAngle;

/// `√2 - 1`, the default rotation angle.
pub const DEFAULT_ALPHA: f64 = 0.414_213_562_373_095_1;

/// Rotation by `alpha` turns. Minimal and distal for irrational `alpha`;
/// irrationality is taken on trust from the parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rotation {
    alpha: f64,
}

impl Rotation {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::InvalidPoint("rotation angle must lie in (0, 1)"));
        }
        Ok(Rotation { alpha })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn step(&self, p: &CircleAngle) -> CircleAngle {
        p.rotate(self.alpha)
    }

    pub fn random_point(&self, rng: &mut dyn RngCore) -> CircleAngle {
        CircleAngle::new(uniform_unit(rng))
    }
}

/// Uniform f64 in `[0, 1)` from 53 random bits.
pub(crate) fn uniform_unit(rng: &mut dyn RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}
