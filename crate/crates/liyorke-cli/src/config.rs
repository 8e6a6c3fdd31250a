//! Experiment configuration files: flat TOML, one experiment per file,
//! unknown fields rejected, every grid an explicit list.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use crate::catalog::CocycleSpec;

/// A fully described experiment. The `seed` is mandatory for randomized
/// operations; reports embed the resolved form so each row is replayable.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub id: String,
    pub system: String,
    pub operation: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Path of a cocycle/selector descriptor, resolved relative to the
    /// config file.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cocycle: Option<String>,
    /// The parsed descriptor; filled in when the config is loaded so reports
    /// stay self-contained.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cocycle_spec: Option<CocycleSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    #[serde(default)]
    pub params: Params,
}

/// Operation parameters. Every operation reads the subset it needs and
/// rejects configs missing a required field.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub y: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x2: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub y2: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_prox: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_asym: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub distal_floor: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub horizon: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tail_start: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub attempts: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub set_size: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub resolution: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta_prime: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub etas: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub horizons: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub u: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub v: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
}

impl ExperimentConfig {
    /// Loads a config file and resolves its cocycle descriptor (if any)
    /// relative to the config's directory.
    pub fn load(path: &Path) -> Result<ExperimentConfig> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let mut config: ExperimentConfig = toml::from_str(&text)
            .with_context(|| format!("parsing config {}", path.display()))?;
        if config.id.is_empty() {
            bail!("config needs a nonempty id");
        }
        if let (Some(rel), None) = (&config.cocycle, &config.cocycle_spec) {
            let dir = path.parent().unwrap_or(Path::new("."));
            let spec_path = dir.join(rel);
            config.cocycle_spec = Some(CocycleSpec::load(&spec_path)?);
        }
        Ok(config)
    }

    /// Whether the operation draws random samples and therefore demands a
    /// seed.
    pub fn requires_seed(&self) -> bool {
        match self.operation.as_str() {
            "chain" | "chain-join" | "hitting" | "return-period" => false,
            // deterministic only when the pair is given explicitly
            "classify-pair" | "orbit-trace" => self.params.x.is_none(),
            _ => true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.requires_seed() && self.seed.is_none() {
            bail!("operation '{}' draws samples: a seed is mandatory", self.operation);
        }
        Ok(())
    }
}

/// Key-value view of the resolved parameters for report headers.
pub fn params_map(params: &Params) -> BTreeMap<String, serde_json::Value> {
    let value = serde_json::to_value(params).expect("params serialize");
    match value {
        serde_json::Value::Object(map) => map.into_iter().collect(),
        _ => BTreeMap::new(),
    }
}
