//! Finite-horizon pair classification.
//!
//! Proximality and asymptoticity are statements about orbit limits; a desk
//! experiment sees a finite window. Estimates over `[tail_start, horizon]`
//! stand in for liminf/limsup, and every verdict is a *candidate*, never a
//! proof. The tail window discards the initial segment so that engineered
//! initial closeness does not masquerade as recurring proximality.

use crate::error::{Error, Result};
use crate::num::pow2_neg;
use crate::point::Point;
use crate::systems::{PairWalker, System};

/// Thresholds and window for [`classify_pair`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassifyParams {
    /// Separation threshold: a Li-Yorke candidate must exceed it in the tail.
    pub epsilon: f64,
    /// Proximality threshold: the tail minimum must drop below it.
    pub delta_prox: f64,
    /// Asymptotic threshold: tail maximum at or below it means the pair
    /// never separates; defaults to `epsilon`.
    pub delta_asym: f64,
    /// A pair whose distance never drops below this over the whole window is
    /// a distal candidate.
    pub distal_floor: f64,
    pub horizon: usize,
    pub tail_start: usize,
}

impl ClassifyParams {
    /// Defaults for symbolic experiments: `ε = 1/4`, `δ_prox = 2^-10`,
    /// `δ_asym = ε`, distal floor `2^-6`, horizon `10^4`, tail start at a
    /// tenth of the horizon.
    pub fn with_horizon(horizon: usize) -> ClassifyParams {
        ClassifyParams {
            epsilon: 0.25,
            delta_prox: pow2_neg(10),
            delta_asym: 0.25,
            distal_floor: pow2_neg(6),
            horizon,
            tail_start: horizon / 10,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.delta_prox > 0.0 && self.delta_prox < self.epsilon) {
            return Err(Error::InvalidPoint("need 0 < delta_prox < epsilon"));
        }
        if self.tail_start >= self.horizon {
            return Err(Error::InvalidPoint("tail_start must precede horizon"));
        }
        if !(self.distal_floor > self.delta_prox) {
            return Err(Error::InvalidPoint("distal_floor must exceed delta_prox"));
        }
        Ok(())
    }
}

impl Default for ClassifyParams {
    fn default() -> Self {
        ClassifyParams::with_horizon(10_000)
    }
}

/// Evidence bucket for a pair at a fixed horizon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Bucket {
    /// Tail minimum below `delta_prox` and tail maximum above `epsilon`:
    /// proximal but separating, the Li-Yorke pattern.
    LiYorkeCandidate,
    /// Tail maximum at or below `delta_asym`: the pair never separates.
    AsymptoticCandidate,
    /// Distance stayed at or above `distal_floor` over the whole window.
    DistalCandidate,
    /// None of the patterns resolved at this horizon.
    Undetermined,
}

impl Bucket {
    pub fn name(self) -> &'static str {
        match self {
            Bucket::LiYorkeCandidate => "li-yorke",
            Bucket::AsymptoticCandidate => "asymptotic",
            Bucket::DistalCandidate => "distal",
            Bucket::Undetermined => "undetermined",
        }
    }
}

/// Finite-horizon evidence record for one pair.
#[derive(Debug, Clone, PartialEq)]
pub struct PairVerdict {
    pub bucket: Bucket,
    /// Minimum distance over `[tail_start, horizon]`.
    pub prox_estimate: f64,
    /// Maximum distance over `[tail_start, horizon]`.
    pub sep_estimate: f64,
    /// Minimum distance over the whole window `[0, horizon]`.
    pub min_overall: f64,
    pub params: ClassifyParams,
}

/// Classifies the pair `(x, y)` under the system by its distance profile.
///
/// Decision rule, first match wins: Li-Yorke when
/// `prox_estimate < delta_prox` and `sep_estimate > epsilon`; distal when
/// the whole-window minimum stays at or above `distal_floor`; asymptotic
/// when `sep_estimate <= delta_asym`; undetermined otherwise. Distal takes
/// precedence over asymptotic so that isometric pairs at small constant
/// separation — which at a finite horizon satisfy both descriptions — land
/// in the bucket matching their liminf behavior.
pub fn classify_pair(
    system: &System,
    x: &Point,
    y: &Point,
    params: &ClassifyParams,
) -> Result<PairVerdict> {
    params.validate()?;
    for p in [x, y] {
        if let Some(depth) = p.min_depth() {
            if depth < params.horizon + 1 {
                return Err(Error::DepthExhausted {
                    needed: params.horizon + 1,
                    available: depth,
                });
            }
        }
    }
    let mut walker = PairWalker::new(system, x, y);
    let mut prox = f64::INFINITY;
    let mut sep = f64::NEG_INFINITY;
    let mut min_overall = f64::INFINITY;
    for i in 0..=params.horizon {
        let d = walker.distance()?;
        min_overall = min_overall.min(d);
        if i >= params.tail_start {
            prox = prox.min(d);
            sep = sep.max(d);
        }
        if i < params.horizon {
            walker.advance()?;
        }
    }
    let bucket = if prox < params.delta_prox && sep > params.epsilon {
        Bucket::LiYorkeCandidate
    } else if min_overall >= params.distal_floor {
        Bucket::DistalCandidate
    } else if sep <= params.delta_asym {
        Bucket::AsymptoticCandidate
    } else {
        Bucket::Undetermined
    };
    Ok(PairVerdict { bucket, prox_estimate: prox, sep_estimate: sep, min_overall, params: *params })
}
