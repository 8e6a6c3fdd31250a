//! Executes one experiment config and assembles its report.

use anyhow::{anyhow, bail, Context, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use liyorke::analysis::{
    chain_cardinality_survey, chain_join, characteristic_chain, classify_pair, distal_density,
    hitting_times, identity_return_check, lys_witness_search, pair_orbit_score, scrambled_search,
    transitive_pair_candidate, verify_chain, verify_hits, ClassifyParams,
};
use liyorke::point::{distance, Point, SymbolicWord};
use liyorke::systems::FullShift;
use liyorke::{System, COMPARISON_WINDOW};

use crate::catalog::{build_system, format_point, parse_cell, parse_point};
use crate::config::{ExperimentConfig, Params};
use crate::report::{
    chain_json, density_json, hitting_json, identity_return_json, point_json, survey_row_json,
    trace_body, verdict_json, Report,
};

/// Runs the experiment described by the config and returns the report;
/// nothing touches the filesystem here.
pub fn run_config(config: &ExperimentConfig) -> Result<Report> {
    config.validate()?;
    let system = build_system(&config.system, config.cocycle_spec.as_ref())?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed.unwrap_or(0));
    let mut report = Report::new(config);
    match config.operation.as_str() {
        "classify-pair" => classify_op(config, &system, &mut rng, &mut report)?,
        "orbit-trace" => orbit_op(config, &system, &mut rng, &mut report)?,
        "chain" => chain_op(config, &system, &mut report)?,
        "chain-join" => chain_join_op(config, &system, &mut report)?,
        "chain-cardinality" => cardinality_op(config, &system, &mut rng, &mut report)?,
        "identity-return" => identity_return_op(config, &system, &mut rng, &mut report)?,
        "hitting" => hitting_op(config, &system, &mut report)?,
        "transit-score" => transit_op(config, &system, &mut rng, &mut report)?,
        "witness-search" => witness_op(config, &system, &mut rng, &mut report)?,
        "scrambled-search" => scrambled_op(config, &system, &mut rng, &mut report)?,
        "distal-density" => density_op(config, &system, &mut rng, &mut report)?,
        "return-period" => return_period_op(config, &system, &mut report)?,
        other => bail!("unknown operation '{other}'"),
    }
    Ok(report)
}

fn classify_params(p: &Params) -> ClassifyParams {
    let horizon = p.horizon.unwrap_or(10_000);
    let mut cp = ClassifyParams::with_horizon(horizon);
    if let Some(v) = p.epsilon {
        cp.epsilon = v;
        cp.delta_asym = v;
    }
    if let Some(v) = p.delta_prox {
        cp.delta_prox = v;
    }
    if let Some(v) = p.delta_asym {
        cp.delta_asym = v;
    }
    if let Some(v) = p.distal_floor {
        cp.distal_floor = v;
    }
    if let Some(v) = p.tail_start {
        cp.tail_start = v;
    }
    cp
}

fn depth_for(p: &Params) -> usize {
    p.depth.unwrap_or_else(|| p.horizon.unwrap_or(10_000) + COMPARISON_WINDOW)
}

/// The space chain pairs live in: the base of a skew product.
fn chain_base(system: &System) -> Result<&System> {
    match system {
        System::Skew(sk) => Ok(sk.base()),
        _ => bail!("this operation needs a finite-fiber skew product (set a cocycle file)"),
    }
}

fn err_str(e: liyorke::Error) -> anyhow::Error {
    anyhow!("{e}")
}

fn classify_op(
    config: &ExperimentConfig,
    system: &System,
    rng: &mut ChaCha8Rng,
    report: &mut Report,
) -> Result<()> {
    let params = classify_params(&config.params);
    let depth = depth_for(&config.params);
    let pairs: Vec<(Point, Point)> = match (&config.params.x, &config.params.y) {
        (Some(x), Some(y)) => vec![(parse_point(system, x)?, parse_point(system, y)?)],
        (None, None) => {
            let n = config.params.samples.unwrap_or(10);
            (0..n)
                .map(|_| {
                    let x = system.random_point(depth, rng).map_err(err_str)?;
                    let y = system.random_point(depth, rng).map_err(err_str)?;
                    Ok((x, y))
                })
                .collect::<Result<_>>()?
        }
        _ => bail!("classify-pair needs both x and y, or neither"),
    };
    for (x, y) in &pairs {
        let v = classify_pair(system, x, y, &params).map_err(err_str)?;
        report.note(&format!(
            "pair ({}, {}): {} prox={:.3e} sep={:.3e}",
            format_point(x),
            format_point(y),
            v.bucket.name(),
            v.prox_estimate,
            v.sep_estimate
        ));
        report.push_row(json!({
            "x": point_json(x),
            "y": point_json(y),
            "verdict": verdict_json(&v),
        }));
    }
    Ok(())
}

fn orbit_op(
    config: &ExperimentConfig,
    system: &System,
    rng: &mut ChaCha8Rng,
    report: &mut Report,
) -> Result<()> {
    let horizon = config.params.horizon.unwrap_or(1_000);
    let depth = config.params.depth.unwrap_or(horizon + COMPARISON_WINDOW);
    let (x, y) = match (&config.params.x, &config.params.y) {
        (Some(x), Some(y)) => (parse_point(system, x)?, parse_point(system, y)?),
        (None, None) => (
            system.random_point(depth, rng).map_err(err_str)?,
            system.random_point(depth, rng).map_err(err_str)?,
        ),
        _ => bail!("orbit-trace needs both x and y, or neither"),
    };
    let distances = system.pair_orbit_distances(&x, &y, horizon).map_err(err_str)?;
    report.note(&format!(
        "trace of {} steps, d0={:.3e}, min={:.3e}, max={:.3e}",
        horizon,
        distances[0],
        distances.iter().cloned().fold(f64::INFINITY, f64::min),
        distances.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
    ));
    report.traces.push(("pair0".into(), trace_body(&distances)));
    report.push_row(json!({
        "x": point_json(&x),
        "y": point_json(&y),
        "distances": distances,
    }));
    Ok(())
}

fn chain_op(config: &ExperimentConfig, system: &System, report: &mut Report) -> Result<()> {
    let base = chain_base(system)?;
    let eta = config.params.eta.ok_or_else(|| anyhow!("chain needs eta"))?;
    let horizon = config.params.horizon.unwrap_or(10_000);
    let x = parse_point(base, config.params.x.as_deref().ok_or_else(|| anyhow!("chain needs x"))?)?;
    let y = parse_point(base, config.params.y.as_deref().ok_or_else(|| anyhow!("chain needs y"))?)?;
    let rec = characteristic_chain(system, &x, &y, eta, horizon).map_err(err_str)?;
    verify_chain(system, &rec).map_err(err_str)?;
    report.note(&format!(
        "chain at eta={eta}: {} close times, {} distinct elements, saturated at {:?}",
        rec.indices.len(),
        rec.cardinality(),
        rec.saturation_time
    ));
    report.push_row(chain_json(&rec));
    Ok(())
}

fn chain_join_op(config: &ExperimentConfig, system: &System, report: &mut Report) -> Result<()> {
    let base = chain_base(system)?;
    let p = &config.params;
    let eta = p.eta.ok_or_else(|| anyhow!("chain-join needs eta"))?;
    let eta_prime = p.eta_prime.ok_or_else(|| anyhow!("chain-join needs eta_prime"))?;
    let horizon = p.horizon.unwrap_or(10_000);
    let need = |v: &Option<String>, name: &str| {
        v.clone().ok_or_else(|| anyhow!("chain-join needs {name}"))
    };
    let x = parse_point(base, &need(&p.x, "x")?)?;
    let y = parse_point(base, &need(&p.y, "y")?)?;
    let x2 = parse_point(base, &need(&p.x2, "x2")?)?;
    let y2 = parse_point(base, &need(&p.y2, "y2")?)?;
    let rec1 = characteristic_chain(system, &x, &y, eta, horizon).map_err(err_str)?;
    let rec2 = characteristic_chain(system, &x2, &y2, eta_prime, horizon).map_err(err_str)?;
    let join = chain_join(system, &rec1, &rec2).map_err(err_str)?;
    report.note(&format!(
        "joined at time {} (containment: {})",
        join.connect_time, join.containment_holds
    ));
    report.push_row(json!({
        "connect_time": join.connect_time,
        "connector": crate::report::element_json(&join.connector),
        "containment_holds": join.containment_holds,
        "missing": join.missing.iter().map(crate::report::element_json).collect::<Vec<_>>(),
        "joined": chain_json(&join.joined),
    }));
    Ok(())
}

/// Samples base pairs whose product orbit covers the whole resolution net,
/// so they behave like transitive pairs as far as the horizon can tell.
fn sample_high_score_pairs(
    base: &System,
    samples: usize,
    resolution: usize,
    score_horizon: usize,
    depth: usize,
    rng: &mut ChaCha8Rng,
    report: &mut Report,
) -> Result<Vec<(Point, Point)>> {
    let mut pairs = Vec::new();
    let mut tried = 0usize;
    while pairs.len() < samples && tried < samples * 8 {
        tried += 1;
        let x = base.random_point(depth, rng).map_err(err_str)?;
        let t = transitive_pair_candidate(base, &x, resolution, score_horizon, rng)
            .map_err(err_str)?;
        if t.score == 1.0 {
            pairs.push((x, t.partner));
        }
    }
    if pairs.len() < samples {
        report.note(&format!(
            "warning: only {} of {} sampled pairs reached evidence score 1",
            pairs.len(),
            samples
        ));
    }
    Ok(pairs)
}

fn cardinality_op(
    config: &ExperimentConfig,
    system: &System,
    rng: &mut ChaCha8Rng,
    report: &mut Report,
) -> Result<()> {
    let base = chain_base(system)?;
    let p = &config.params;
    let samples = p.samples.ok_or_else(|| anyhow!("chain-cardinality needs samples"))?;
    let etas = p.etas.clone().ok_or_else(|| anyhow!("chain-cardinality needs etas"))?;
    let horizons = p.horizons.clone().ok_or_else(|| anyhow!("chain-cardinality needs horizons"))?;
    let max_h = horizons.iter().copied().max().unwrap_or(0);
    let depth = p.depth.unwrap_or(max_h + COMPARISON_WINDOW);
    let resolution = p.resolution.unwrap_or(2);
    let score_horizon = 10_000.min(max_h);
    let pairs =
        sample_high_score_pairs(base, samples, resolution, score_horizon, depth, rng, report)?;
    let survey = chain_cardinality_survey(system, &pairs, &etas, &horizons).map_err(err_str)?;
    match survey.common_cardinality {
        Some(c) => report.note(&format!("single common cardinality across all rows: {c}")),
        None => report.note("FINDING: cardinalities disagree across rows"),
    }
    for row in &survey.rows {
        report.push_row(survey_row_json(row));
    }
    report.push_row(json!({ "common_cardinality": survey.common_cardinality }));
    Ok(())
}

/// A partner forming a generically close pair with `x`: same leading window,
/// independent continuation.
fn close_partner(
    base: &System,
    x: &Point,
    eta: f64,
    depth: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Point> {
    let mut prefix_len = 0usize;
    while 0.5f64.powi(prefix_len as i32) >= eta {
        prefix_len += 1;
    }
    match (base, x) {
        (System::Shift(s), Point::Word(w)) => {
            let fresh = FullShift::new(s.alphabet_size()).map_err(err_str)?.random_word(depth, rng);
            let mut digits = fresh.symbols().to_vec();
            digits[..prefix_len].copy_from_slice(&w.symbols()[..prefix_len]);
            Ok(Point::Word(SymbolicWord::new(s.alphabet_size(), digits).map_err(err_str)?))
        }
        _ => {
            let candidates = base.partner_candidates(x, eta, 4, rng).map_err(err_str)?;
            candidates.into_iter().next().ok_or_else(|| anyhow!("no close partner found"))
        }
    }
}

fn identity_return_op(
    config: &ExperimentConfig,
    system: &System,
    rng: &mut ChaCha8Rng,
    report: &mut Report,
) -> Result<()> {
    let base = chain_base(system)?;
    let p = &config.params;
    let samples = p.samples.ok_or_else(|| anyhow!("identity-return needs samples"))?;
    let eta = p.eta.unwrap_or(0.25);
    let eta_prime = p.eta_prime.unwrap_or(0.03125);
    let horizon = p.horizon.unwrap_or(100_000);
    let depth = p.depth.unwrap_or(horizon + COMPARISON_WINDOW);
    let mut held = 0usize;
    for i in 0..samples {
        let x = base.random_point(depth, rng).map_err(err_str)?;
        let y = close_partner(base, &x, eta, depth, rng)?;
        match identity_return_check(system, &x, &y, eta, eta_prime, horizon) {
            Ok(res) => {
                if res.holds {
                    held += 1;
                }
                report.push_row(json!({
                    "pair_index": i,
                    "x": point_json(&x),
                    "y": point_json(&y),
                    "result": identity_return_json(&res),
                }));
            }
            Err(liyorke::Error::NoTracingTime { .. }) => {
                report.push_row(json!({
                    "pair_index": i,
                    "x": point_json(&x),
                    "y": point_json(&y),
                    "result": null,
                    "error": "no tracing time within horizon",
                }));
            }
            Err(e) => return Err(err_str(e)),
        }
    }
    report.note(&format!("identity return held on {held} of {samples} pairs"));
    Ok(())
}

fn hitting_op(config: &ExperimentConfig, system: &System, report: &mut Report) -> Result<()> {
    let p = &config.params;
    let u = parse_cell(p.u.as_deref().ok_or_else(|| anyhow!("hitting needs u"))?)?;
    let v = parse_cell(p.v.as_deref().ok_or_else(|| anyhow!("hitting needs v"))?)?;
    let horizon = p.horizon.unwrap_or(1_000);
    let rec = hitting_times(system, &u, &v, horizon).map_err(err_str)?;
    let verified = verify_hits(system, &rec).map_err(err_str)?;
    report.note(&format!(
        "{} hits up to {horizon}, longest run {}, {verified} witnesses verified",
        rec.hits.len(),
        rec.longest_run
    ));
    report.push_row(hitting_json(&rec, verified));
    Ok(())
}

fn transit_op(
    config: &ExperimentConfig,
    system: &System,
    rng: &mut ChaCha8Rng,
    report: &mut Report,
) -> Result<()> {
    let p = &config.params;
    let horizon = p.horizon.unwrap_or(10_000);
    let resolution = p.resolution.unwrap_or(2);
    let depth = p.depth.unwrap_or(horizon + COMPARISON_WINDOW);
    let samples = p.samples.unwrap_or(1);
    for _ in 0..samples {
        let x = match &p.x {
            Some(s) => parse_point(system, s)?,
            None => system.random_point(depth, rng).map_err(err_str)?,
        };
        let t = transitive_pair_candidate(system, &x, resolution, horizon, rng).map_err(err_str)?;
        report.note(&format!("score {} ({} of {} cells)", t.score, t.visited, t.total_cells));
        report.push_row(json!({
            "x": point_json(&x),
            "partner": point_json(&t.partner),
            "score": t.score,
            "visited": t.visited,
            "total_cells": t.total_cells,
        }));
    }
    Ok(())
}

fn witness_op(
    config: &ExperimentConfig,
    system: &System,
    rng: &mut ChaCha8Rng,
    report: &mut Report,
) -> Result<()> {
    let p = &config.params;
    let radius = p.radius.ok_or_else(|| anyhow!("witness-search needs radius"))?;
    let attempts = p.attempts.unwrap_or(32);
    let params = classify_params(p);
    let depth = depth_for(p);
    let samples = p.samples.unwrap_or(1);
    let mut found = 0usize;
    for i in 0..samples {
        let x = match &p.x {
            Some(s) => parse_point(system, s)?,
            None => system.random_point(depth, rng).map_err(err_str)?,
        };
        let out = lys_witness_search(system, &x, radius, &params, attempts, rng).map_err(err_str)?;
        let row = match &out.witness {
            Some((w, v)) => {
                found += 1;
                json!({
                    "base_index": i,
                    "x": point_json(&x),
                    "witness": point_json(w),
                    "verdict": verdict_json(v),
                    "attempts_used": out.attempts_used,
                })
            }
            None => json!({
                "base_index": i,
                "x": point_json(&x),
                "witness": null,
                "attempts_used": out.attempts_used,
            }),
        };
        report.push_row(row);
    }
    report.note(&format!("witness found for {found} of {samples} base points"));
    Ok(())
}

fn scrambled_op(
    config: &ExperimentConfig,
    system: &System,
    rng: &mut ChaCha8Rng,
    report: &mut Report,
) -> Result<()> {
    let p = &config.params;
    let set_size = p.set_size.ok_or_else(|| anyhow!("scrambled-search needs set_size"))?;
    let attempts = p.attempts.unwrap_or(64);
    let params = classify_params(p);
    let depth = depth_for(p);
    let out = scrambled_search(system, set_size, &params, depth, attempts, rng).map_err(err_str)?;
    report.note(&format!(
        "scrambled set of {} (target {set_size}) after {} candidates",
        out.points.len(),
        out.attempts_used
    ));
    report.push_row(json!({
        "points": out.points.iter().map(point_json).collect::<Vec<_>>(),
        "verdicts": out
            .verdicts
            .iter()
            .map(|(i, j, v)| json!({ "i": i, "j": j, "verdict": verdict_json(v) }))
            .collect::<Vec<_>>(),
        "attempts_used": out.attempts_used,
        "reached": out.points.len() == set_size,
    }));
    Ok(())
}

fn density_op(
    config: &ExperimentConfig,
    system: &System,
    rng: &mut ChaCha8Rng,
    report: &mut Report,
) -> Result<()> {
    let p = &config.params;
    let samples = p.samples.ok_or_else(|| anyhow!("distal-density needs samples"))?;
    let cell = parse_cell(p.h.as_deref().unwrap_or("whole"))?;
    let params = classify_params(p);
    let depth = depth_for(p);
    let rep = distal_density(system, &cell, samples, &params, depth, rng).map_err(err_str)?;
    report.note(&format!(
        "buckets over {samples} pairs: li-yorke {}, asymptotic {}, distal {}, undetermined {}",
        rep.li_yorke, rep.asymptotic, rep.distal, rep.undetermined
    ));
    report.push_row(density_json(&rep));
    Ok(())
}

fn return_period_op(config: &ExperimentConfig, system: &System, report: &mut Report) -> Result<()> {
    let delta = config.params.delta.ok_or_else(|| anyhow!("return-period needs delta"))?;
    let odometer = match system {
        System::Odometer(o) => o,
        _ => bail!("return-period needs an odometer system"),
    };
    let period = odometer.return_period(delta).map_err(err_str)?;
    report.note(&format!("return period for delta={delta}: {period}"));
    report.push_row(json!({ "delta": delta, "period": period }));
    Ok(())
}

/// Re-runs the experiment embedded in a report and compares payloads:
/// bit-exact for symbolic systems, within 1e-9 when circle coordinates are
/// involved.
pub fn replay_file(path: &std::path::Path, seed_override: Option<u64>) -> Result<ReplayOutcome> {
    let (header, rows) = crate::report::read_jsonl(path)?;
    let mut config = config_from_header(&header)?;
    if let Some(seed) = seed_override {
        config.seed = Some(seed);
    }
    let fresh = run_config(&config)?;
    let tol = if config.system.contains("rotation") || config.system.contains("circle-ext") {
        1e-9
    } else {
        0.0
    };
    let mut mismatches = Vec::new();
    if rows.len() != fresh.rows.len() {
        mismatches.push(format!("row count {} vs {}", rows.len(), fresh.rows.len()));
    }
    for (i, (old, new)) in rows.iter().zip(&fresh.rows).enumerate() {
        if !crate::report::values_match(old, new, tol) {
            mismatches.push(format!("row {i} differs"));
        }
    }
    Ok(ReplayOutcome { matched: mismatches.is_empty(), mismatches })
}

#[derive(Debug)]
pub struct ReplayOutcome {
    pub matched: bool,
    pub mismatches: Vec<String>,
}

fn config_from_header(header: &serde_json::Value) -> Result<ExperimentConfig> {
    let get = |k: &str| header.get(k).cloned().unwrap_or(serde_json::Value::Null);
    Ok(ExperimentConfig {
        id: serde_json::from_value(get("id")).context("header id")?,
        system: serde_json::from_value(get("system")).context("header system")?,
        operation: serde_json::from_value(get("operation")).context("header operation")?,
        seed: serde_json::from_value(get("seed")).unwrap_or(None),
        cocycle: None,
        cocycle_spec: match header.get("cocycle") {
            Some(v) if !v.is_null() => Some(serde_json::from_value(v.clone())?),
            _ => None,
        },
        output: None,
        params: serde_json::from_value(get("params")).context("header params")?,
    })
}

/// `x` and `y` parsed against the chain base — exposed for the `chain`
/// subcommand shortcut.
pub fn quick_chain_points(system: &System, x: &str, y: &str) -> Result<(Point, Point)> {
    let base = chain_base(system)?;
    Ok((parse_point(base, x)?, parse_point(base, y)?))
}

/// Used by the orbit shortcut to sanity-check explicit points.
pub fn check_pair(system: &System, x: &Point, y: &Point) -> Result<()> {
    system.contains(x).map_err(err_str)?;
    system.contains(y).map_err(err_str)?;
    distance(x, y).map_err(err_str)?;
    Ok(())
}

/// Score helper shared by tests.
pub fn score_pair(
    system: &System,
    x: &Point,
    y: &Point,
    resolution: usize,
    horizon: usize,
) -> Result<f64> {
    Ok(pair_orbit_score(system, x, y, resolution, horizon).map_err(err_str)?.0)
}
