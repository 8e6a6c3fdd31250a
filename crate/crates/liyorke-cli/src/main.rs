use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use liyorke_cli::catalog::{build_system, catalog_text, CocycleSpec};
use liyorke_cli::config::{ExperimentConfig, Params};
use liyorke_cli::runner::{quick_chain_points, replay_file, run_config};
use liyorke_cli::resolve_output;

/// Desk-scale experiments on subshifts, odometers, and skew products:
/// pair classification, chain records, hitting times, witness search.
#[derive(Parser)]
#[command(name = "liyorke", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a TOML config file.
    Run {
        config: PathBuf,
        /// Override the config's seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the config's horizon.
        #[arg(long)]
        horizon: Option<usize>,
        /// Override the output path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the system catalog.
    ListSystems,
    /// Re-execute a report from its embedded parameters and compare payloads.
    Replay {
        report: PathBuf,
        /// Replay with a different seed (to demonstrate mismatch detection).
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Dump a pair distance trace as a two-column data file.
    Orbit {
        #[arg(long)]
        system: String,
        #[arg(long)]
        cocycle: Option<PathBuf>,
        #[arg(long)]
        x: Option<String>,
        #[arg(long)]
        y: Option<String>,
        #[arg(long, default_value_t = 1_000)]
        steps: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = "orbit.jsonl")]
        out: PathBuf,
    },
    /// Record the characteristic chain of a base pair under a skew product.
    Chain {
        #[arg(long)]
        system: String,
        #[arg(long)]
        cocycle: PathBuf,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long)]
        eta: f64,
        #[arg(long, default_value_t = 10_000)]
        horizon: usize,
        #[arg(long, default_value = "chain.jsonl")]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    match dispatch() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn dispatch() -> Result<()> {
    match Cli::parse().command {
        Command::Run { config, seed, horizon, out } => {
            let mut cfg = ExperimentConfig::load(&config)?;
            if let Some(seed) = seed {
                cfg.seed = Some(seed);
            }
            if let Some(h) = horizon {
                cfg.params.horizon = Some(h);
            }
            if let Some(out) = out {
                cfg.output = Some(out.display().to_string());
            }
            let report = run_config(&cfg)?;
            let path = resolve_output(&cfg);
            report.write(&path)?;
            println!("{}", report.summary.trim_end());
            println!("report: {}", path.display());
            Ok(())
        }
        Command::ListSystems => {
            print!("{}", catalog_text());
            Ok(())
        }
        Command::Replay { report, seed } => {
            let outcome = replay_file(&report, seed)?;
            if outcome.matched {
                println!("replay: match");
                Ok(())
            } else {
                for m in &outcome.mismatches {
                    eprintln!("replay: {m}");
                }
                anyhow::bail!("replay mismatch");
            }
        }
        Command::Orbit { system, cocycle, x, y, steps, seed, out } => {
            let spec = cocycle.map(|p| CocycleSpec::load(&p)).transpose()?;
            let cfg = ExperimentConfig {
                id: "orbit".into(),
                system,
                operation: "orbit-trace".into(),
                seed,
                cocycle: None,
                cocycle_spec: spec,
                output: Some(out.display().to_string()),
                params: Params {
                    x,
                    y,
                    horizon: Some(steps),
                    ..Params::default()
                },
            };
            let report = run_config(&cfg)?;
            let path = resolve_output(&cfg);
            report.write(&path)?;
            println!("{}", report.summary.trim_end());
            println!("trace: {}", liyorke_cli::report::trace_path(&path, "pair0").display());
            Ok(())
        }
        Command::Chain { system, cocycle, x, y, eta, horizon, out } => {
            let spec = CocycleSpec::load(&cocycle)?;
            // fail early with a readable message if the points do not parse
            let sys = build_system(&system, Some(&spec))?;
            quick_chain_points(&sys, &x, &y).context("parsing chain points")?;
            let cfg = ExperimentConfig {
                id: "chain".into(),
                system,
                operation: "chain".into(),
                seed: None,
                cocycle: None,
                cocycle_spec: Some(spec),
                output: Some(out.display().to_string()),
                params: Params {
                    x: Some(x),
                    y: Some(y),
                    eta: Some(eta),
                    horizon: Some(horizon),
                    ..Params::default()
                },
            };
            let report = run_config(&cfg)?;
            let path = resolve_output(&cfg);
            report.write(&path)?;
            println!("{}", report.summary.trim_end());
            Ok(())
        }
    }
}
