//! The Chacon substitution subshift.
//!
//! Generated by the prefix recurrence `B_{n+1} = B_n B_n 1 B_n`, `B_0 = 0`,
//! so `|B_{n+1}| = 3|B_n| + 1`. The subshift of all factors of the limit
//! word is minimal and weakly mixing; it is the stock minimal weakly-mixing
//! base for skew-product experiments here.

use alloc::sync::Arc;
use alloc::vec::Vec;

use rand::RngCore;

use crate::error::{Error, Result};
use crate::point::SymbolicWord;

/// Prefix `B_n` of the Chacon word.
pub fn chacon_prefix(level: usize) -> Vec<u8> {
    let mut b = alloc::vec![0u8];
    for _ in 0..level {
        let mut next = Vec::with_capacity(3 * b.len() + 1);
        next.extend_from_slice(&b);
        next.extend_from_slice(&b);
        next.push(1);
        next.extend_from_slice(&b);
        b = next;
    }
    b
}

/// `|B_n|`: also the scale-n rigidity times of the subshift, where repeated
/// `B_n B_n` blocks make a point and its `|B_n|`-shift agree for a long run.
pub fn chacon_block_len(level: usize) -> usize {
    let mut len = 1usize;
    for _ in 0..level {
        len = 3 * len + 1;
    }
    len
}

/// Default cache: `B_13`, about 2.4 M symbols, enough for offsets and
/// horizons at desk scale.
pub const DEFAULT_LEVEL: usize = 13;

/// The Chacon subshift with an eagerly built prefix cache. Points are
/// windows into the cache, so sampling and shifting never copy symbols.
#[derive(Debug, Clone)]
pub struct Chacon {
    word: Arc<[u8]>,
}

impl Chacon {
    pub fn new() -> Self {
        Chacon::with_level(DEFAULT_LEVEL)
    }

    pub fn with_level(level: usize) -> Self {
        Chacon { word: chacon_prefix(level).into() }
    }

    pub fn word(&self) -> &[u8] {
        &self.word
    }

    pub fn word_len(&self) -> usize {
        self.word.len()
    }

    /// The subword at `offset`, trusted for `depth` symbols.
    pub fn point(&self, depth: usize, offset: usize) -> Result<SymbolicWord> {
        SymbolicWord::from_shared(2, self.word.clone(), offset, depth)
    }

    pub fn step(&self, w: &SymbolicWord) -> Result<SymbolicWord> {
        if w.alphabet_size() != 2 {
            return Err(Error::Incompatible("chacon points are binary"));
        }
        w.shift()
    }

    /// Uniformly random window of the cached word.
    pub fn random_point(&self, depth: usize, rng: &mut dyn RngCore) -> Result<SymbolicWord> {
        if depth >= self.word.len() {
            return Err(Error::DepthExhausted { needed: depth, available: self.word.len() });
        }
        let span = (self.word.len() - depth) as u64;
        let offset = (rng.next_u64() % span) as usize;
        self.point(depth, offset)
    }

    /// Offsets (up to `limit`, shuffled) where `pattern` occurs with `depth`
    /// symbols of room after it.
    pub fn occurrences(
        &self,
        pattern: &[u8],
        depth: usize,
        limit: usize,
        rng: &mut dyn RngCore,
    ) -> Vec<usize> {
        let word = &self.word;
        if pattern.is_empty() || depth > word.len() {
            return Vec::new();
        }
        let last = word.len() - depth;
        let mut found: Vec<usize> = Vec::new();
        for o in 0..=last {
            if word[o..o + pattern.len().min(depth)].starts_with(pattern) {
                found.push(o);
            }
        }
        // Fisher-Yates prefix shuffle, then truncate.
        let n = found.len();
        for i in 0..limit.min(n) {
            let j = i + (rng.next_u64() % (n - i) as u64) as usize;
            found.swap(i, j);
        }
        found.truncate(limit);
        found
    }

    /// Partner candidates for a Li-Yorke witness search around `x`:
    /// windows of the cached word sharing `x`'s first `prefix_len` symbols.
    /// Offsets displaced by a block length ±|B_n| come first — those are the
    /// rigidity returns where `B_n B_n` repetitions force deep proximal dips
    /// with the cocycle parities aligned — followed by sampled occurrences
    /// of the prefix elsewhere in the word.
    pub fn partner_candidates(
        &self,
        x: &SymbolicWord,
        prefix_len: usize,
        limit: usize,
        rng: &mut dyn RngCore,
    ) -> Result<Vec<usize>> {
        if x.depth() < prefix_len {
            return Err(Error::DepthExhausted { needed: prefix_len, available: x.depth() });
        }
        let depth = x.depth();
        let prefix = &x.symbols()[..prefix_len];
        let mut out: Vec<usize> = Vec::new();
        // locate x inside the cache to try rigidity offsets
        if let Some(o) = self.locate(x) {
            let mut level = 0;
            loop {
                let h = chacon_block_len(level);
                if h > self.word.len() {
                    break;
                }
                if h >= 11 {
                    for o2 in [o.checked_add(h), o.checked_sub(h)].into_iter().flatten() {
                        if o2 + depth <= self.word.len()
                            && self.word[o2..o2 + prefix_len] == *prefix
                        {
                            out.push(o2);
                        }
                    }
                }
                level += 1;
            }
        }
        let sampled = self.occurrences(prefix, depth, limit, rng);
        for o2 in sampled {
            if !out.contains(&o2) {
                out.push(o2);
            }
        }
        Ok(out)
    }

    /// Offset of `x`'s window inside the cache, when `x` is backed by it.
    fn locate(&self, x: &SymbolicWord) -> Option<usize> {
        let sym = x.symbols();
        let word: &[u8] = &self.word;
        let start = sym.as_ptr() as usize;
        let base = word.as_ptr() as usize;
        if start >= base && start + sym.len() <= base + word.len() {
            Some(start - base)
        } else {
            None
        }
    }
}

impl Default for Chacon {
    fn default() -> Self {
        Chacon::new()
    }
}
