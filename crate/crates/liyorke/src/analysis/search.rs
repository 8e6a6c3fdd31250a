//! Witness search, scrambled-set accumulation, and transitive-pair scoring.

use alloc::vec::Vec;

use rand::RngCore;

use crate::analysis::classify::{classify_pair, Bucket, ClassifyParams, PairVerdict};
use crate::error::{Error, Result};
use crate::point::{distance, Point, SymbolicWord};
use crate::systems::System;

/// Outcome of a Li-Yorke witness search around a fixed point.
#[derive(Debug, Clone)]
pub struct WitnessOutcome {
    /// The first candidate classified Li-Yorke, with its verdict.
    pub witness: Option<(Point, PairVerdict)>,
    pub attempts_used: usize,
}

/// Searches for a partner within `radius` of `x` forming a Li-Yorke
/// candidate pair. Absence after `attempts` candidates is a negative
/// outcome, not an error; distal systems are expected to return none.
pub fn lys_witness_search(
    system: &System,
    x: &Point,
    radius: f64,
    params: &ClassifyParams,
    attempts: usize,
    rng: &mut dyn RngCore,
) -> Result<WitnessOutcome> {
    params.validate()?;
    let candidates = system.partner_candidates(x, radius, attempts, rng)?;
    let mut used = 0usize;
    for candidate in candidates {
        used += 1;
        match distance(x, &candidate) {
            Ok(d) if d < radius => {}
            _ => continue,
        }
        match classify_pair(system, x, &candidate, params) {
            Ok(v) if v.bucket == Bucket::LiYorkeCandidate => {
                return Ok(WitnessOutcome { witness: Some((candidate, v)), attempts_used: used });
            }
            Ok(_) => {}
            // a candidate that cannot be classified is skipped, not fatal
            Err(Error::DepthExhausted { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(WitnessOutcome { witness: None, attempts_used: used })
}

/// A greedily accumulated scrambled set with its full pairwise verdict
/// matrix.
#[derive(Debug, Clone)]
pub struct ScrambledOutcome {
    pub points: Vec<Point>,
    /// Verdicts for every unordered pair `(i, j)`, `i < j`, of kept points.
    pub verdicts: Vec<(usize, usize, PairVerdict)>,
    pub attempts_used: usize,
}

/// Greedy scrambled-set accumulation: a candidate is kept when it forms a
/// Li-Yorke candidate pair with every point kept so far. An undersized
/// result after `attempts` candidates is a report, not an error.
pub fn scrambled_search(
    system: &System,
    set_size: usize,
    params: &ClassifyParams,
    depth: usize,
    attempts: usize,
    rng: &mut dyn RngCore,
) -> Result<ScrambledOutcome> {
    if set_size < 2 {
        return Err(Error::InvalidPoint("set size must be at least 2"));
    }
    params.validate()?;
    let mut kept: Vec<Point> = Vec::new();
    let mut verdicts: Vec<(usize, usize, PairVerdict)> = Vec::new();
    let mut used = 0usize;
    for attempt in 0..attempts {
        if kept.len() == set_size {
            break;
        }
        let candidate = scrambled_candidate(system, attempt, set_size, depth, rng)?;
        used += 1;
        let mut pair_verdicts = Vec::with_capacity(kept.len());
        let mut all_li_yorke = true;
        for existing in &kept {
            match classify_pair(system, existing, &candidate, params) {
                Ok(v) if v.bucket == Bucket::LiYorkeCandidate => pair_verdicts.push(v),
                Ok(_) | Err(Error::DepthExhausted { .. }) => {
                    all_li_yorke = false;
                    break;
                }
                Err(e) => return Err(e),
            }
        }
        if all_li_yorke {
            let j = kept.len();
            for (i, v) in pair_verdicts.into_iter().enumerate() {
                verdicts.push((i, j, v));
            }
            kept.push(candidate);
        }
    }
    Ok(ScrambledOutcome { points: kept, verdicts, attempts_used: used })
}

/// Candidate stream for the scrambled search. Over full shifts the first
/// `set_size` candidates come from a constructive block family (see
/// [`block_family_word`]); everything else is random sampling. Fibered
/// candidates share one label: scrambled sets are hunted inside a single
/// fiber slice.
fn scrambled_candidate(
    system: &System,
    attempt: usize,
    set_size: usize,
    depth: usize,
    rng: &mut dyn RngCore,
) -> Result<Point> {
    match system {
        System::Shift(s) if attempt < set_size => Ok(Point::Word(SymbolicWord::new(
            s.alphabet_size(),
            block_family_word(attempt, set_size, depth),
        )?)),
        System::Skew(sk) => {
            let base = match sk.base() {
                System::Shift(s) if attempt < set_size => Point::Word(SymbolicWord::new(
                    s.alphabet_size(),
                    block_family_word(attempt, set_size, depth),
                )?),
                base => base.random_point(depth, rng)?,
            };
            Ok(Point::fibered(base, 0))
        }
        other => other.random_point(depth, rng),
    }
}

/// Member `member` of a family of `set_size` binary words that is pairwise
/// Li-Yorke by construction: time is cut into cycles of `set_size` blocks
/// whose length grows by a factor 3 per cycle, and word `w` holds the
/// symbol 1 exactly during block `w` of each cycle. Any two words agree
/// over every block belonging to neither (proximal dips at every scale) and
/// differ at the start of each block belonging to exactly one (recurring
/// separation). Block lengths are even so order-2 fiber cocycles stay
/// aligned where the words agree.
pub fn block_family_word(member: usize, set_size: usize, depth: usize) -> Vec<u8> {
    let mut digits = alloc::vec![0u8; depth];
    let mut pos = 0usize;
    let mut block_len = 2usize;
    'outer: loop {
        for slot in 0..set_size {
            let symbol = u8::from(slot == member);
            for _ in 0..block_len {
                if pos >= depth {
                    break 'outer;
                }
                digits[pos] = symbol;
                pos += 1;
            }
        }
        block_len *= 3;
    }
    digits
}

/// A generic partner for `x` with the fraction of the product-space net its
/// pair orbit visited: the evidence score. A score of 1 is still only
/// evidence — transitivity quantifies over all open sets and all time.
#[derive(Debug, Clone)]
pub struct TransitCandidate {
    pub partner: Point,
    pub score: f64,
    pub visited: usize,
    pub total_cells: usize,
}

/// Pairs `x` with an independent generic partner and scores how much of the
/// `resolution`-net of the square space the pair orbit visits within the
/// horizon.
pub fn transitive_pair_candidate(
    system: &System,
    x: &Point,
    resolution: usize,
    horizon: usize,
    rng: &mut dyn RngCore,
) -> Result<TransitCandidate> {
    let y = system.generic_partner(x, rng)?;
    let score = pair_orbit_score(system, x, &y, resolution, horizon)?;
    Ok(TransitCandidate { partner: y, score: score.0, visited: score.1, total_cells: score.2 })
}

/// Fraction of net-cell pairs visited by the orbit of `(x, y)` under the
/// product of the system with itself.
pub fn pair_orbit_score(
    system: &System,
    x: &Point,
    y: &Point,
    resolution: usize,
    horizon: usize,
) -> Result<(f64, usize, usize)> {
    let net = system.net(resolution)?;
    let cells = net.cell_count();
    let mut visited = alloc::vec![false; cells * cells];
    let mut count = 0usize;
    let mut cx = x.clone();
    let mut cy = y.clone();
    for i in 0..=horizon {
        let ix = net.index_of(&cx)?;
        let iy = net.index_of(&cy)?;
        let slot = ix * cells + iy;
        if !visited[slot] {
            visited[slot] = true;
            count += 1;
        }
        if i < horizon {
            cx = system.step(&cx)?;
            cy = system.step(&cy)?;
        }
    }
    Ok((count as f64 / (cells * cells) as f64, count, cells * cells))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::point::CircleAngle;
    use crate::systems::{FullShift, Rotation, DEFAULT_ALPHA};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn shift() -> System {
        System::Shift(FullShift::new(2).unwrap())
    }

    #[test]
    fn witness_found_on_the_full_shift() {
        let sys = shift();
        let mut rng = ChaCha8Rng::seed_from_u64(71);
        let params = ClassifyParams { epsilon: 0.5, ..ClassifyParams::with_horizon(2_000) };
        let x = sys.random_point(2_100, &mut rng).unwrap();
        let out =
            lys_witness_search(&sys, &x, 1.0 / 64.0, &params, 8, &mut rng).unwrap();
        let (w, v) = out.witness.expect("tail surgery should produce a witness");
        assert_eq!(v.bucket, Bucket::LiYorkeCandidate);
        assert!(distance(&x, &w).unwrap() < 1.0 / 64.0);
    }

    #[test]
    fn no_witness_in_a_rotation() {
        let sys = System::Rotation(Rotation::new(DEFAULT_ALPHA).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(72);
        let params = ClassifyParams::with_horizon(1_000);
        let x = Point::Circle(CircleAngle::new(0.3));
        for radius in [0.6, 0.1, 1e-3] {
            let out = lys_witness_search(&sys, &x, radius, &params, 10, &mut rng).unwrap();
            assert!(out.witness.is_none());
            assert_eq!(out.attempts_used, 10);
        }
    }

    #[test]
    fn family_words_are_pairwise_li_yorke() {
        let sys = shift();
        let params = ClassifyParams { epsilon: 0.5, ..ClassifyParams::with_horizon(10_000) };
        let depth = 10_100;
        let words: Vec<Point> = (0..5)
            .map(|m| Point::Word(SymbolicWord::new(2, block_family_word(m, 5, depth)).unwrap()))
            .collect();
        for i in 0..5 {
            for j in (i + 1)..5 {
                let v = classify_pair(&sys, &words[i], &words[j], &params).unwrap();
                assert_eq!(v.bucket, Bucket::LiYorkeCandidate, "pair ({i},{j}): {v:?}");
            }
        }
    }

    #[test]
    fn scrambled_search_reaches_target_on_full_shift() {
        let sys = shift();
        let mut rng = ChaCha8Rng::seed_from_u64(73);
        let params = ClassifyParams { epsilon: 0.5, ..ClassifyParams::with_horizon(5_000) };
        let out = scrambled_search(&sys, 4, &params, 5_100, 20, &mut rng).unwrap();
        assert_eq!(out.points.len(), 4);
        assert_eq!(out.verdicts.len(), 6);
        assert!(out
            .verdicts
            .iter()
            .all(|(_, _, v)| v.bucket == Bucket::LiYorkeCandidate));
    }

    #[test]
    fn scrambled_search_stalls_on_a_rotation() {
        let sys = System::Rotation(Rotation::new(DEFAULT_ALPHA).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(74);
        let params = ClassifyParams::with_horizon(500);
        let out = scrambled_search(&sys, 3, &params, 0, 15, &mut rng).unwrap();
        assert_eq!(out.points.len(), 1, "only the seed point can ever be kept");
        assert_eq!(out.attempts_used, 15);
    }

    #[test]
    fn generic_full_shift_pair_scores_full_coverage() {
        let sys = shift();
        let mut rng = ChaCha8Rng::seed_from_u64(75);
        let x = sys.random_point(10_100, &mut rng).unwrap();
        let t = transitive_pair_candidate(&sys, &x, 2, 10_000, &mut rng).unwrap();
        assert_eq!(t.total_cells, 16);
        assert_eq!(t.score, 1.0);
    }

    #[test]
    fn diagonal_pair_misses_off_diagonal_cells() {
        let sys = shift();
        let mut rng = ChaCha8Rng::seed_from_u64(76);
        let x = sys.random_point(2_100, &mut rng).unwrap();
        let (score, _, _) = pair_orbit_score(&sys, &x, &x, 2, 2_000).unwrap();
        assert!(score <= 0.25 + 1e-12, "diagonal orbit visited {score}");
    }

    #[test]
    fn rotation_product_score_plateaus_below_one() {
        let sys = System::Rotation(Rotation::new(DEFAULT_ALPHA).unwrap());
        let x = Point::Circle(CircleAngle::new(0.2));
        let y = Point::Circle(CircleAngle::new(0.45));
        let (score, _, _) = pair_orbit_score(&sys, &x, &y, 8, 4_000).unwrap();
        assert!(score < 1.0, "pair differences are invariant, got {score}");
    }
}
