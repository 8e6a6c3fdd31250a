//! Experiment runner library behind the `liyorke` binary: config loading,
//! the system catalog, operation dispatch, and JSON-lines reports.

pub mod catalog;
pub mod config;
pub mod report;
pub mod runner;

use std::path::PathBuf;

/// Environment variable naming the default report directory.
pub const OUT_DIR_ENV: &str = "LIYORKE_OUT";

/// Where a config's report goes: explicit `output`, else
/// `$LIYORKE_OUT/<id>.jsonl`, else `./<id>.jsonl`.
pub fn resolve_output(config: &config::ExperimentConfig) -> PathBuf {
    if let Some(out) = &config.output {
        return PathBuf::from(out);
    }
    let file = format!("{}.jsonl", config.id);
    match std::env::var_os(OUT_DIR_ENV) {
        Some(dir) => PathBuf::from(dir).join(file),
        None => PathBuf::from(file),
    }
}
