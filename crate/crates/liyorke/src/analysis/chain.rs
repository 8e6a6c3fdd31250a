//! Characteristic sequences of pair orbits under skew products, saturated
//! chains, chain joins, and the identity-return check.
//!
//! For a base pair `(x, y)` of a finite-fiber skew product, the element
//! recorded at time `i` is the pair of fiber-map compositions along the two
//! base orbits, and the chain keeps the times at which the pair orbit is
//! `η`-close. Joining chains locates a time at which the pair returns close
//! to another pair's start and transports that pair's element set by the
//! connecting element; the containment and identity membership predicted by
//! the saturated-chain argument are then verified on the computed sets,
//! never assumed.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::perm::CocycleElement;
use crate::point::{distance, Point};
use crate::skew::SkewProduct;
use crate::systems::{PairWalker, System};

/// The recorded `η`-characteristic data of one base pair up to a horizon.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainRecord {
    pub eta: f64,
    pub horizon: usize,
    /// The base pair the chain was recorded for.
    pub x: Point,
    pub y: Point,
    /// Times `i <= horizon` with `d(x_i, y_i) < eta`, strictly increasing.
    pub indices: Vec<usize>,
    /// The element at each recorded time, parallel to `indices`.
    pub elements: Vec<CocycleElement>,
    /// Deduplicated element set, sorted.
    pub c_set: Vec<CocycleElement>,
    /// Time of the last first occurrence: from here on the recorded chain
    /// contains every element value it will ever show at this horizon.
    pub saturation_time: Option<usize>,
}

impl ChainRecord {
    pub fn cardinality(&self) -> usize {
        self.c_set.len()
    }

    pub fn contains_element(&self, e: &CocycleElement) -> bool {
        self.c_set.binary_search(e).is_ok()
    }
}

fn as_skew(system: &System) -> Result<&SkewProduct> {
    match system {
        System::Skew(sk) => Ok(sk),
        _ => Err(Error::InvalidSystem("chain operations need a finite-fiber skew product")),
    }
}

/// Records the characteristic chains of the base pair `(x, y)` at several
/// thresholds in one pass.
pub fn characteristic_chains(
    system: &System,
    x: &Point,
    y: &Point,
    etas: &[f64],
    horizon: usize,
) -> Result<Vec<ChainRecord>> {
    let skew = as_skew(system)?;
    if etas.iter().any(|&e| !(e > 0.0)) {
        return Err(Error::InvalidPoint("eta thresholds must be positive"));
    }
    let m = skew.cocycle().fiber_size();
    let mut walker = PairWalker::new(skew.base(), x, y);
    let mut current = CocycleElement::identity(m);
    let mut indices: Vec<Vec<usize>> = alloc::vec![Vec::new(); etas.len()];
    let mut elements: Vec<Vec<CocycleElement>> = alloc::vec![Vec::new(); etas.len()];
    let mut sets: Vec<BTreeSet<CocycleElement>> = alloc::vec![BTreeSet::new(); etas.len()];
    let mut saturation: Vec<Option<usize>> = alloc::vec![None; etas.len()];
    for i in 0..=horizon {
        let d = walker.distance()?;
        for (k, &eta) in etas.iter().enumerate() {
            if d < eta {
                indices[k].push(i);
                elements[k].push(current.clone());
                if sets[k].insert(current.clone()) {
                    saturation[k] = Some(i);
                }
            }
        }
        if i < horizon {
            let gx = skew.cocycle().perm_for(walker.x())?;
            let gy = skew.cocycle().perm_for(walker.y())?;
            current = CocycleElement {
                x_map: gx.compose(&current.x_map),
                y_map: gy.compose(&current.y_map),
            };
            walker.advance()?;
        }
    }
    Ok(etas
        .iter()
        .enumerate()
        .map(|(k, &eta)| ChainRecord {
            eta,
            horizon,
            x: x.clone(),
            y: y.clone(),
            indices: core::mem::take(&mut indices[k]),
            elements: core::mem::take(&mut elements[k]),
            c_set: core::mem::take(&mut sets[k]).into_iter().collect(),
            saturation_time: saturation[k],
        })
        .collect())
}

/// Single-threshold convenience wrapper around [`characteristic_chains`].
pub fn characteristic_chain(
    system: &System,
    x: &Point,
    y: &Point,
    eta: f64,
    horizon: usize,
) -> Result<ChainRecord> {
    Ok(characteristic_chains(system, x, y, &[eta], horizon)?.pop().expect("one record per eta"))
}

/// Re-verifies a record against a fresh, plain orbit walk: indices strictly
/// increasing, every recorded time `η`-close, elements matching an
/// independent recomputation of the compositions, and the element set equal
/// to the deduplicated elements.
pub fn verify_chain(system: &System, rec: &ChainRecord) -> Result<()> {
    let skew = as_skew(system)?;
    if rec.indices.len() != rec.elements.len() {
        return Err(Error::InvalidPoint("indices and elements differ in length"));
    }
    if rec.indices.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidPoint("indices not strictly increasing"));
    }
    let m = skew.cocycle().fiber_size();
    let mut cx = rec.x.clone();
    let mut cy = rec.y.clone();
    let mut current = CocycleElement::identity(m);
    let mut at = 0usize;
    let mut fresh: BTreeSet<CocycleElement> = BTreeSet::new();
    for i in 0..=rec.horizon {
        if at < rec.indices.len() && rec.indices[at] == i {
            let d = distance(&cx, &cy)?;
            if d >= rec.eta {
                return Err(Error::InvalidPoint("recorded index is not eta-close"));
            }
            if rec.elements[at] != current {
                return Err(Error::InvalidPoint("recorded element differs from recomputation"));
            }
            fresh.insert(current.clone());
            at += 1;
        } else if distance(&cx, &cy)? < rec.eta {
            return Err(Error::InvalidPoint("eta-close time missing from record"));
        }
        if i < rec.horizon {
            let gx = skew.cocycle().perm_for(&cx)?;
            let gy = skew.cocycle().perm_for(&cy)?;
            current = CocycleElement {
                x_map: gx.compose(&current.x_map),
                y_map: gy.compose(&current.y_map),
            };
            cx = skew.base().step(&cx)?;
            cy = skew.base().step(&cy)?;
        }
    }
    if at != rec.indices.len() {
        return Err(Error::InvalidPoint("record lists times beyond the horizon"));
    }
    let fresh: Vec<CocycleElement> = fresh.into_iter().collect();
    if fresh != rec.c_set {
        return Err(Error::InvalidPoint("element set differs from deduplicated elements"));
    }
    Ok(())
}

/// Result of joining the chain of one pair onto another.
#[derive(Debug, Clone)]
pub struct ChainJoin {
    /// The time of the first chain at which its pair traces the second
    /// pair's start to the finer precision.
    pub connect_time: usize,
    /// The element at the connect time.
    pub connector: CocycleElement,
    /// Whether the first chain's element set contains the second's composed
    /// with the connector, checked elementwise on the computed sets.
    pub containment_holds: bool,
    /// Elements of the transported set missing from the first chain's set.
    pub missing: Vec<CocycleElement>,
    /// The extended chain: the first record up to the connect time, then the
    /// second record's elements transported by the connector.
    pub joined: ChainRecord,
}

/// Joins `rec2` onto `rec1`: scans `rec1`'s pair orbit for a recorded
/// `η`-time at or past `rec1`'s saturation time where the pair lies within
/// `rec2.eta` of `rec2`'s starting pair, coordinate by coordinate. The
/// containment `C1 ⊇ C2 ∘ connector` is verified on the computed sets; a
/// candidate time failing it is reported rather than skipped silently (the
/// last candidate's outcome is returned if none verifies).
pub fn chain_join(system: &System, rec1: &ChainRecord, rec2: &ChainRecord) -> Result<ChainJoin> {
    let skew = as_skew(system)?;
    if rec2.eta > rec1.eta {
        return Err(Error::InvalidPoint("the joined chain must use the finer threshold"));
    }
    let threshold = rec1.saturation_time.unwrap_or(0);
    let m = skew.cocycle().fiber_size();
    let set1: BTreeSet<&CocycleElement> = rec1.c_set.iter().collect();
    let mut walker = PairWalker::new(skew.base(), &rec1.x, &rec1.y);
    let mut current = CocycleElement::identity(m);
    let mut index_at = 0usize;
    let mut fallback: Option<ChainJoin> = None;
    for i in 0..=rec1.horizon {
        let recorded = index_at < rec1.indices.len() && rec1.indices[index_at] == i;
        if recorded {
            index_at += 1;
        }
        if recorded && i >= threshold {
            let dx = distance(walker.x(), &rec2.x)?;
            let dy = distance(walker.y(), &rec2.y)?;
            if dx < rec2.eta && dy < rec2.eta {
                let transported: Vec<CocycleElement> =
                    rec2.c_set.iter().map(|e| e.compose(&current)).collect();
                let missing: Vec<CocycleElement> =
                    transported.iter().filter(|e| !set1.contains(e)).cloned().collect();
                let join = build_join(rec1, rec2, i, &current, missing);
                if join.containment_holds {
                    return Ok(join);
                }
                fallback = Some(join);
            }
        }
        if i < rec1.horizon {
            let gx = skew.cocycle().perm_for(walker.x())?;
            let gy = skew.cocycle().perm_for(walker.y())?;
            current = CocycleElement {
                x_map: gx.compose(&current.x_map),
                y_map: gy.compose(&current.y_map),
            };
            walker.advance()?;
        }
    }
    fallback.ok_or(Error::NoTracingTime { horizon: rec1.horizon })
}

fn build_join(
    rec1: &ChainRecord,
    rec2: &ChainRecord,
    connect_time: usize,
    connector: &CocycleElement,
    missing: Vec<CocycleElement>,
) -> ChainJoin {
    let mut indices = Vec::new();
    let mut elements = Vec::new();
    for (&i, e) in rec1.indices.iter().zip(&rec1.elements) {
        if i > connect_time {
            break;
        }
        indices.push(i);
        elements.push(e.clone());
    }
    for (&j, e) in rec2.indices.iter().zip(&rec2.elements) {
        if j == 0 {
            continue; // time 0 of rec2 is the connect time itself
        }
        indices.push(connect_time + j);
        elements.push(e.compose(connector));
    }
    let mut set: BTreeSet<CocycleElement> = BTreeSet::new();
    let mut saturation_time = None;
    for (&i, e) in indices.iter().zip(&elements) {
        if set.insert(e.clone()) {
            saturation_time = Some(i);
        }
    }
    ChainJoin {
        connect_time,
        connector: connector.clone(),
        containment_holds: missing.is_empty(),
        missing,
        joined: ChainRecord {
            eta: rec1.eta,
            horizon: connect_time + rec2.horizon,
            x: rec1.x.clone(),
            y: rec1.y.clone(),
            indices,
            elements,
            c_set: set.into_iter().collect(),
            saturation_time,
        },
    }
}

/// Outcome of the identity-return check on one pair.
#[derive(Debug, Clone)]
pub struct IdentityReturn {
    /// Whether some verified connector put the identity in the transported
    /// finer set.
    pub holds: bool,
    /// The connect time that verified (or the first candidate, on failure).
    pub connect_time: usize,
    pub connector: CocycleElement,
    /// The element `e` of the finer set with `e ∘ connector = (Id, Id)`.
    pub witness: Option<CocycleElement>,
    pub candidates_tried: usize,
    pub eta: f64,
    pub eta_prime: f64,
    pub horizon: usize,
}

/// For an `η`-close pair, finds a recorded `η`-time at which the pair orbit
/// returns within `η'` of its own start (both coordinates), and checks that
/// the inverse of the element there lies in the pair's `η'`-element set —
/// equivalently, that the transported set `C(η') ∘ connector` contains the
/// identity. The witness is verified by explicit composition.
pub fn identity_return_check(
    system: &System,
    x: &Point,
    y: &Point,
    eta: f64,
    eta_prime: f64,
    horizon: usize,
) -> Result<IdentityReturn> {
    if !(eta_prime < eta) {
        return Err(Error::InvalidPoint("eta_prime must be finer than eta"));
    }
    if distance(x, y)? >= eta {
        return Err(Error::InvalidPoint("pair is not eta-close at time zero"));
    }
    let chains = characteristic_chains(system, x, y, &[eta, eta_prime], horizon)?;
    let coarse = &chains[0];
    let fine = &chains[1];
    let threshold = coarse.saturation_time.unwrap_or(0).max(1);

    // walk again collecting return candidates among the coarse chain times
    let skew = as_skew(system)?;
    let m = skew.cocycle().fiber_size();
    let mut walker = PairWalker::new(skew.base(), x, y);
    let mut current = CocycleElement::identity(m);
    let mut index_at = 0usize;
    let mut tried = 0usize;
    let mut first_candidate: Option<(usize, CocycleElement)> = None;
    for i in 0..=horizon {
        let recorded = index_at < coarse.indices.len() && coarse.indices[index_at] == i;
        if recorded {
            index_at += 1;
        }
        if recorded && i >= threshold {
            let dx = distance(walker.x(), x)?;
            let dy = distance(walker.y(), y)?;
            if dx < eta_prime && dy < eta_prime {
                tried += 1;
                if first_candidate.is_none() {
                    first_candidate = Some((i, current.clone()));
                }
                let witness = current.inverse();
                if fine.contains_element(&witness) {
                    // verified: the witness composes with the connector to the identity
                    debug_assert!(witness.compose(&current).is_identity());
                    return Ok(IdentityReturn {
                        holds: true,
                        connect_time: i,
                        connector: current.clone(),
                        witness: Some(witness),
                        candidates_tried: tried,
                        eta,
                        eta_prime,
                        horizon,
                    });
                }
            }
        }
        if i < horizon {
            let gx = skew.cocycle().perm_for(walker.x())?;
            let gy = skew.cocycle().perm_for(walker.y())?;
            current = CocycleElement {
                x_map: gx.compose(&current.x_map),
                y_map: gy.compose(&current.y_map),
            };
            walker.advance()?;
        }
    }
    match first_candidate {
        Some((i, connector)) => Ok(IdentityReturn {
            holds: false,
            connect_time: i,
            connector,
            witness: None,
            candidates_tried: tried,
            eta,
            eta_prime,
            horizon,
        }),
        None => Err(Error::NoTracingTime { horizon }),
    }
}

/// One row of a cardinality survey.
#[derive(Debug, Clone, PartialEq)]
pub struct SurveyRow {
    pub pair_index: usize,
    pub eta: f64,
    pub horizon: usize,
    /// `None` when the pair ran out of depth before this horizon.
    pub cardinality: Option<usize>,
    pub saturation_time: Option<usize>,
}

/// Element-set cardinalities across sampled pairs, thresholds, and horizons.
#[derive(Debug, Clone)]
pub struct CardinalitySurvey {
    pub rows: Vec<SurveyRow>,
    /// The single shared cardinality, when every resolved row agrees.
    pub common_cardinality: Option<usize>,
}

/// Computes `#C` for every sampled pair at every threshold and horizon.
/// Depth exhaustion on a pair yields unresolved rows for it rather than an
/// error; disagreement across rows is reported through
/// `common_cardinality = None`, not an error — it is a finding.
pub fn chain_cardinality_survey(
    system: &System,
    pairs: &[(Point, Point)],
    etas: &[f64],
    horizons: &[usize],
) -> Result<CardinalitySurvey> {
    as_skew(system)?;
    let max_horizon = horizons.iter().copied().max().unwrap_or(0);
    let mut rows = Vec::new();
    for (pair_index, (x, y)) in pairs.iter().enumerate() {
        match characteristic_chains(system, x, y, etas, max_horizon) {
            Ok(records) => {
                for rec in &records {
                    for &h in horizons {
                        // first-occurrence times within [0, h]
                        let mut seen: BTreeSet<&CocycleElement> = BTreeSet::new();
                        let mut sat = None;
                        for (&i, e) in rec.indices.iter().zip(&rec.elements) {
                            if i > h {
                                break;
                            }
                            if seen.insert(e) {
                                sat = Some(i);
                            }
                        }
                        rows.push(SurveyRow {
                            pair_index,
                            eta: rec.eta,
                            horizon: h,
                            cardinality: Some(seen.len()),
                            saturation_time: sat,
                        });
                    }
                }
            }
            Err(Error::DepthExhausted { .. }) => {
                for &eta in etas {
                    for &h in horizons {
                        rows.push(SurveyRow {
                            pair_index,
                            eta,
                            horizon: h,
                            cardinality: None,
                            saturation_time: None,
                        });
                    }
                }
            }
            Err(other) => return Err(other),
        }
    }
    let mut common = None;
    let mut consistent = true;
    for row in &rows {
        match (row.cardinality, common) {
            (Some(c), None) => common = Some(c),
            (Some(c), Some(prev)) if c != prev => consistent = false,
            _ => {}
        }
    }
    Ok(CardinalitySurvey { rows, common_cardinality: if consistent { common } else { None } })
}
