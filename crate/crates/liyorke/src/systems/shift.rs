//! The full shift on a finite alphabet.

use alloc::vec::Vec;

use rand::RngCore;

use crate::error::{Error, Result};
use crate::point::SymbolicWord;

/// Left shift on all one-sided sequences over `{0, .., alphabet_size-1}`.
/// Weakly mixing; not minimal. The workhorse testbed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FullShift {
    alphabet_size: u8,
}

impl FullShift {
    pub fn new(alphabet_size: u8) -> Result<Self> {
        if alphabet_size < 2 {
            return Err(Error::InvalidPoint("alphabet size must be at least 2"));
        }
        Ok(FullShift { alphabet_size })
    }

    pub fn alphabet_size(&self) -> u8 {
        self.alphabet_size
    }

    pub fn step(&self, w: &SymbolicWord) -> Result<SymbolicWord> {
        if w.alphabet_size() != self.alphabet_size {
            return Err(Error::Incompatible("word alphabet differs from shift alphabet"));
        }
        w.shift()
    }

    /// Uniform i.i.d. word of the given trusted length.
    pub fn random_word(&self, depth: usize, rng: &mut dyn RngCore) -> SymbolicWord {
        let a = self.alphabet_size as u32;
        let digits: Vec<u8> = (0..depth).map(|_| (rng.next_u32() % a) as u8).collect();
        SymbolicWord::new(self.alphabet_size, digits).expect("digits are in range")
    }

    /// A partner within `2^-prefix_len` of `x` that alternates long
    /// agreement runs with short bursts of disagreement: the agreement runs
    /// double in length so proximal dips recur at every scale, and each
    /// burst flips an even number of symbols so order-2 fiber cocycles
    /// realign after it.
    pub fn surgery_partner(
        &self,
        x: &SymbolicWord,
        prefix_len: usize,
        rng: &mut dyn RngCore,
    ) -> Result<SymbolicWord> {
        let depth = x.depth();
        if depth <= prefix_len {
            return Err(Error::DepthExhausted { needed: prefix_len + 1, available: depth });
        }
        let a = self.alphabet_size;
        let mut digits = x.symbols().to_vec();
        let mut pos = prefix_len;
        let mut agree_run = 16 + (rng.next_u32() % 17) as usize;
        let burst = 2usize;
        while pos < depth {
            for d in digits.iter_mut().skip(pos).take(burst.min(depth - pos)) {
                let shift = 1 + (rng.next_u32() % (a as u32 - 1)) as u8;
                *d = (*d + shift) % a;
            }
            pos += burst;
            pos = pos.saturating_add(agree_run);
            agree_run = (agree_run * 2).min(1 << 20);
        }
        SymbolicWord::new(a, digits)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::point::{distance, Point};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn step_is_left_shift() {
        let sys = FullShift::new(2).unwrap();
        let w = SymbolicWord::new(2, alloc::vec![0, 1, 1, 0, 1]).unwrap();
        let s = sys.step(&w).unwrap();
        assert_eq!(s.symbols(), &[1, 1, 0, 1]);
        assert_eq!(s.depth(), 4);
    }

    #[test]
    fn surgery_partner_stays_within_radius() {
        let sys = FullShift::new(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let x = sys.random_word(4000, &mut rng);
        let y = sys.surgery_partner(&x, 7, &mut rng).unwrap();
        let d = distance(&Point::Word(x), &Point::Word(y.clone())).unwrap();
        assert!(d < 1.0 / 64.0, "d = {d}");
        assert_eq!(y.depth(), 4000);
    }
}
