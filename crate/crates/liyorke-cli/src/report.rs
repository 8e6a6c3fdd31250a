//! JSON-lines reports, human summaries, and replay comparison.
//!
//! A report is a header line carrying the fully resolved configuration
//! (system, operation, parameters, seed, inlined cocycle descriptor)
//! followed by one row per result. Symbolic experiments reproduce
//! byte-for-byte from the header alone; circle experiments reproduce within
//! `1e-9`. Wall-clock time is kept out of the rows and lives in the text
//! summary, so identical runs yield identical report bytes.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde_json::{json, Map, Value};

use liyorke::analysis::{
    ChainRecord, DensityReport, HittingRecord, IdentityReturn, PairVerdict, SurveyRow,
};
use liyorke::perm::{CocycleElement, Perm};
use liyorke::point::Point;

use crate::catalog::format_point;
use crate::config::{params_map, ExperimentConfig};

pub const FORMAT_VERSION: u32 = 1;

/// An assembled report, not yet on disk.
#[derive(Debug, Clone)]
pub struct Report {
    pub header: Value,
    pub rows: Vec<Value>,
    pub summary: String,
    /// Two-column (step, distance) trace files keyed by stem suffix.
    pub traces: Vec<(String, String)>,
    /// Deterministic token derived from the resolved config; every row
    /// embeds it, tying rows to the run that can replay them.
    run_token: String,
}

impl Report {
    pub fn new(config: &ExperimentConfig) -> Report {
        let mut header = Map::new();
        header.insert("kind".into(), json!("header"));
        header.insert("format".into(), json!(FORMAT_VERSION));
        header.insert("id".into(), json!(config.id));
        header.insert("system".into(), json!(config.system));
        header.insert("operation".into(), json!(config.operation));
        if let Some(seed) = config.seed {
            header.insert("seed".into(), json!(seed));
        }
        if let Some(spec) = &config.cocycle_spec {
            header.insert("cocycle".into(), serde_json::to_value(spec).expect("spec serializes"));
        }
        header.insert("params".into(), Value::Object(params_map(&config.params).into_iter().collect()));
        let run_token = fnv_token(serde_json::to_string(&Value::Object(header.clone()))
            .expect("header serializes")
            .as_bytes());
        header.insert("run".into(), json!(run_token));
        Report {
            header: Value::Object(header),
            rows: Vec::new(),
            summary: String::new(),
            traces: Vec::new(),
            run_token,
        }
    }

    pub fn push_row(&mut self, payload: Value) {
        let mut row = Map::new();
        row.insert("kind".into(), json!("row"));
        row.insert("index".into(), json!(self.rows.len()));
        row.insert("run".into(), json!(self.run_token));
        row.insert("payload".into(), payload);
        self.rows.push(Value::Object(row));
    }

    pub fn note(&mut self, line: &str) {
        self.summary.push_str(line);
        self.summary.push('\n');
    }

    /// The JSON-lines body: header then rows, one value per line.
    pub fn to_jsonl(&self) -> String {
        let mut out = serde_json::to_string(&self.header).expect("header serializes");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&serde_json::to_string(row).expect("row serializes"));
            out.push('\n');
        }
        out
    }

    /// Writes the report, its text summary (with the only wall-clock stamp),
    /// and any trace files. The report file appears only on success of the
    /// whole assembly, never partially.
    pub fn write(&self, path: &Path) -> Result<()> {
        if let Some(dir) = path.parent() {
            if !dir.as_os_str().is_empty() {
                std::fs::create_dir_all(dir)
                    .with_context(|| format!("creating {}", dir.display()))?;
            }
        }
        std::fs::write(path, self.to_jsonl())
            .with_context(|| format!("writing {}", path.display()))?;
        let mut summary = String::new();
        let stamp = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        let _ = writeln!(summary, "report: {}", path.display());
        let _ = writeln!(summary, "written-at-unix: {stamp}");
        let _ = writeln!(summary, "rows: {}", self.rows.len());
        summary.push_str(&self.summary);
        std::fs::write(summary_path(path), summary).context("writing summary")?;
        for (suffix, body) in &self.traces {
            let p = trace_path(path, suffix);
            std::fs::write(&p, body).with_context(|| format!("writing {}", p.display()))?;
        }
        Ok(())
    }
}

/// FNV-1a over the canonical header bytes; stable across runs and machines.
fn fnv_token(bytes: &[u8]) -> String {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        hash ^= u64::from(b);
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    format!("{hash:016x}")
}

pub fn summary_path(report: &Path) -> PathBuf {
    report.with_extension("txt")
}

pub fn trace_path(report: &Path, suffix: &str) -> PathBuf {
    let stem = report.file_stem().and_then(|s| s.to_str()).unwrap_or("report");
    report.with_file_name(format!("{stem}-{suffix}.dat"))
}

/// Two-column gnuplot data: step index and distance.
pub fn trace_body(distances: &[f64]) -> String {
    let mut out = String::with_capacity(distances.len() * 12);
    for (i, d) in distances.iter().enumerate() {
        let _ = writeln!(out, "{i} {d}");
    }
    out
}

pub fn point_json(p: &Point) -> Value {
    json!(format_point(p))
}

pub fn verdict_json(v: &PairVerdict) -> Value {
    json!({
        "bucket": v.bucket.name(),
        "prox_estimate": v.prox_estimate,
        "sep_estimate": v.sep_estimate,
        "min_overall": v.min_overall,
        "epsilon": v.params.epsilon,
        "delta_prox": v.params.delta_prox,
        "delta_asym": v.params.delta_asym,
        "distal_floor": v.params.distal_floor,
        "horizon": v.params.horizon,
        "tail_start": v.params.tail_start,
    })
}

pub fn perm_json(p: &Perm) -> Value {
    json!(p.images().iter().map(|d| char::from(b'0' + d)).collect::<String>())
}

pub fn element_json(e: &CocycleElement) -> Value {
    json!({ "x_map": perm_json(&e.x_map), "y_map": perm_json(&e.y_map) })
}

pub fn chain_json(rec: &ChainRecord) -> Value {
    json!({
        "eta": rec.eta,
        "horizon": rec.horizon,
        "x": point_json(&rec.x),
        "y": point_json(&rec.y),
        "indices": rec.indices,
        "elements": rec.elements.iter().map(element_json).collect::<Vec<_>>(),
        "c_set": rec.c_set.iter().map(element_json).collect::<Vec<_>>(),
        "cardinality": rec.cardinality(),
        "saturation_time": rec.saturation_time,
    })
}

pub fn identity_return_json(r: &IdentityReturn) -> Value {
    json!({
        "holds": r.holds,
        "connect_time": r.connect_time,
        "connector": element_json(&r.connector),
        "witness": r.witness.as_ref().map(element_json),
        "candidates_tried": r.candidates_tried,
        "eta": r.eta,
        "eta_prime": r.eta_prime,
        "horizon": r.horizon,
    })
}

pub fn survey_row_json(row: &SurveyRow) -> Value {
    json!({
        "pair_index": row.pair_index,
        "eta": row.eta,
        "horizon": row.horizon,
        "cardinality": row.cardinality,
        "saturation_time": row.saturation_time,
    })
}

pub fn hitting_json(rec: &HittingRecord, verified: usize) -> Value {
    json!({
        "u": rec.u.describe(),
        "v": rec.v.describe(),
        "horizon": rec.horizon,
        "hits": rec.hits,
        "longest_run": rec.longest_run,
        "witnesses": rec.witnesses.iter().map(point_json).collect::<Vec<_>>(),
        "verified": verified,
    })
}

pub fn density_json(rep: &DensityReport) -> Value {
    json!({
        "samples": rep.samples,
        "li_yorke": rep.li_yorke,
        "asymptotic": rep.asymptotic,
        "distal": rep.distal,
        "undetermined": rep.undetermined,
        "li_yorke_fraction": rep.li_yorke as f64 / rep.samples as f64,
        "distal_fraction": rep.distal as f64 / rep.samples as f64,
    })
}

/// Reads a report file back into header and rows.
pub fn read_jsonl(path: &Path) -> Result<(Value, Vec<Value>)> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading report {}", path.display()))?;
    let mut lines = text.lines();
    let header: Value = serde_json::from_str(
        lines.next().ok_or_else(|| anyhow::anyhow!("empty report"))?,
    )?;
    if header.get("kind").and_then(Value::as_str) != Some("header") {
        bail!("first line is not a report header");
    }
    let rows: Vec<Value> = lines
        .map(|l| serde_json::from_str(l).context("parsing report row"))
        .collect::<Result<_>>()?;
    Ok((header, rows))
}

/// Structural comparison with a numeric tolerance (0 for bit-exact).
pub fn values_match(a: &Value, b: &Value, tol: f64) -> bool {
    match (a, b) {
        (Value::Number(x), Value::Number(y)) => {
            match (x.as_f64(), y.as_f64()) {
                (Some(x), Some(y)) => {
                    if tol == 0.0 {
                        x == y
                    } else {
                        (x - y).abs() <= tol
                    }
                }
                _ => x == y,
            }
        }
        (Value::Array(xs), Value::Array(ys)) => {
            xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| values_match(x, y, tol))
        }
        (Value::Object(xs), Value::Object(ys)) => {
            xs.len() == ys.len()
                && xs.iter().all(|(k, x)| ys.get(k).map_or(false, |y| values_match(x, y, tol)))
        }
        _ => a == b,
    }
}
