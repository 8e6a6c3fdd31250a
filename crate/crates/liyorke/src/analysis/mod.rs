//! Finite-horizon verification machinery: pair classification, chain
//! records over skew products, hitting times, witness and scrambled-set
//! search, and bucket density estimation.

mod chain;
mod classify;
mod density;
mod hitting;
mod search;

pub use chain::{
    chain_cardinality_survey, chain_join, characteristic_chain, characteristic_chains,
    identity_return_check, verify_chain, CardinalitySurvey, ChainJoin, ChainRecord,
    IdentityReturn, SurveyRow,
};
pub use classify::{classify_pair, Bucket, ClassifyParams, PairVerdict};
pub use density::{distal_density, DensityReport};
pub use hitting::{hitting_times, verify_hits, HittingRecord};
pub use search::{
    block_family_word, lys_witness_search, pair_orbit_score, scrambled_search,
    transitive_pair_candidate, ScrambledOutcome, TransitCandidate, WitnessOutcome,
};
