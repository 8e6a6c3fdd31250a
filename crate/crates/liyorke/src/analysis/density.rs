//! Bucket densities over sampled pairs from a cell.

use rand::RngCore;

use crate::analysis::classify::{classify_pair, Bucket, ClassifyParams};
use crate::cell::Cell;
use crate::error::{Error, Result};
use crate::systems::System;

/// Bucket counts over sampled pairs; a distal fraction near zero across a
/// cell is the evidence pattern of a distal set with empty interior.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityReport {
    pub samples: usize,
    pub li_yorke: usize,
    pub asymptotic: usize,
    pub distal: usize,
    pub undetermined: usize,
}

impl DensityReport {
    pub fn fraction(&self, bucket: Bucket) -> f64 {
        let count = match bucket {
            Bucket::LiYorkeCandidate => self.li_yorke,
            Bucket::AsymptoticCandidate => self.asymptotic,
            Bucket::DistalCandidate => self.distal,
            Bucket::Undetermined => self.undetermined,
        };
        count as f64 / self.samples as f64
    }
}

/// Samples `samples` pairs uniformly from `h × h` with the system's natural
/// sampler and classifies each. Zero samples is an error.
pub fn distal_density(
    system: &System,
    h: &Cell,
    samples: usize,
    params: &ClassifyParams,
    depth: usize,
    rng: &mut dyn RngCore,
) -> Result<DensityReport> {
    if samples == 0 {
        return Err(Error::InvalidPoint("need at least one sample"));
    }
    params.validate()?;
    let mut report =
        DensityReport { samples, li_yorke: 0, asymptotic: 0, distal: 0, undetermined: 0 };
    for _ in 0..samples {
        let x = system.random_point_in(h, depth, rng)?;
        let y = system.random_point_in(h, depth, rng)?;
        match classify_pair(system, &x, &y, params)?.bucket {
            Bucket::LiYorkeCandidate => report.li_yorke += 1,
            Bucket::AsymptoticCandidate => report.asymptotic += 1,
            Bucket::DistalCandidate => report.distal += 1,
            Bucket::Undetermined => report.undetermined += 1,
        }
    }
    Ok(report)
}
