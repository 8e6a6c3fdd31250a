//! End-to-end checks of configs, reports, replay, and the binary surface.

use std::fs;
use std::path::Path;
use std::process::Command;

use liyorke_cli::catalog::{
    build_system, catalog_text, format_point, parse_point, parse_system, CocycleSpec,
};
use liyorke_cli::config::ExperimentConfig;
use liyorke_cli::report::trace_path;
use liyorke_cli::runner::{replay_file, run_config};

fn write(path: &Path, text: &str) {
    fs::write(path, text).unwrap();
}

fn swap_cocycle_toml() -> &'static str {
    "kind = \"permutation\"\nfiber_size = 2\n\n[cells]\n\"0\" = \"01\"\n\"1\" = \"10\"\n"
}

fn load_config(dir: &Path, name: &str, body: &str) -> ExperimentConfig {
    let path = dir.join(name);
    write(&path, body);
    ExperimentConfig::load(&path).unwrap()
}

#[test]
fn binary_run_writes_report_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    write(&dir.path().join("swap.toml"), swap_cocycle_toml());
    write(
        &dir.path().join("exp.toml"),
        "id = \"wtest\"\nsystem = \"chacon\"\ncocycle = \"swap.toml\"\noperation = \"witness-search\"\nseed = 7\n\n[params]\nsamples = 2\nradius = 0.03125\nhorizon = 20000\nattempts = 24\n",
    );
    let out = dir.path().join("w.jsonl");
    let status = Command::new(env!("CARGO_BIN_EXE_liyorke"))
        .args(["run"])
        .arg(dir.path().join("exp.toml"))
        .args(["--out"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    assert!(out.exists());
    assert!(out.with_extension("txt").exists());
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.lines().count() >= 3, "header plus two rows");
}

#[test]
fn malformed_config_fails_without_partial_report() {
    let dir = tempfile::tempdir().unwrap();
    write(&dir.path().join("bad.toml"), "id = \"x\"\nsystem = \"chacon\"\noperation = [1,2]\n");
    let out = dir.path().join("bad.jsonl");
    let status = Command::new(env!("CARGO_BIN_EXE_liyorke"))
        .args(["run"])
        .arg(dir.path().join("bad.toml"))
        .args(["--out"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(!status.success());
    assert!(!out.exists(), "no partial report on error");
}

#[test]
fn unknown_config_fields_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("unk.toml");
    write(
        &path,
        "id = \"x\"\nsystem = \"chacon\"\noperation = \"classify-pair\"\nmystery = 3\n\n[params]\nx = \"0010\"\ny = \"0010\"\n",
    );
    let err = ExperimentConfig::load(&path).unwrap_err().to_string();
    assert!(err.contains("unk.toml"), "{err}");
}

#[test]
fn randomized_operations_demand_a_seed() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = load_config(
        dir.path(),
        "seedless.toml",
        "id = \"x\"\nsystem = \"full-shift:2\"\noperation = \"distal-density\"\n\n[params]\nsamples = 3\nhorizon = 200\n",
    );
    let err = run_config(&cfg).unwrap_err().to_string();
    assert!(err.contains("seed"), "{err}");
}

#[test]
fn unknown_systems_are_rejected() {
    assert!(parse_system("toral-automorphism:2").is_err());
    assert!(parse_system("rotation:1.5").is_err());
    assert!(parse_system("circle-ext:k=1").is_err());
}

#[test]
fn replay_matches_and_detects_seed_changes() {
    let dir = tempfile::tempdir().unwrap();
    write(&dir.path().join("swap.toml"), swap_cocycle_toml());
    let cfg = load_config(
        dir.path(),
        "exp.toml",
        "id = \"replay\"\nsystem = \"full-shift:2\"\ncocycle = \"swap.toml\"\noperation = \"identity-return\"\nseed = 9\n\n[params]\nsamples = 2\nhorizon = 20000\neta = 0.25\neta_prime = 0.03125\n",
    );
    let report = run_config(&cfg).unwrap();
    let path = dir.path().join("replay.jsonl");
    report.write(&path).unwrap();
    let same = replay_file(&path, None).unwrap();
    assert!(same.matched, "{:?}", same.mismatches);
    let altered = replay_file(&path, Some(10)).unwrap();
    assert!(!altered.matched);
}

#[test]
fn replay_of_circle_reports_uses_tolerance() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = load_config(
        dir.path(),
        "rot.toml",
        "id = \"rot\"\nsystem = \"rotation:0.41421356\"\noperation = \"classify-pair\"\n\n[params]\nx = \"0.0\"\ny = \"0.4\"\nhorizon = 500\n",
    );
    let report = run_config(&cfg).unwrap();
    assert_eq!(report.rows[0]["payload"]["verdict"]["bucket"], serde_json::json!("distal"));
    let path = dir.path().join("rot.jsonl");
    report.write(&path).unwrap();
    assert!(replay_file(&path, None).unwrap().matched);
}

#[test]
fn orbit_trace_is_two_column_data() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = load_config(
        dir.path(),
        "orbit.toml",
        "id = \"orbit\"\nsystem = \"full-shift:2\"\noperation = \"orbit-trace\"\nseed = 3\n\n[params]\nhorizon = 100\n",
    );
    let report = run_config(&cfg).unwrap();
    let path = dir.path().join("orbit.jsonl");
    report.write(&path).unwrap();
    let trace = fs::read_to_string(trace_path(&path, "pair0")).unwrap();
    let first = trace.lines().next().unwrap();
    assert_eq!(first.split_whitespace().count(), 2);
    assert_eq!(trace.lines().count(), 101);
}

#[test]
fn descriptor_variants_build_systems() {
    let dir = tempfile::tempdir().unwrap();
    // arc cells over the rotation
    let arcs = dir.path().join("arcs.toml");
    write(
        &arcs,
        "kind = \"permutation\"\nfiber_size = 2\narcs = [0.0, 0.5]\nperms = [\"01\", \"10\"]\n",
    );
    let spec = CocycleSpec::load(&arcs).unwrap();
    build_system("rotation:0.41421356", Some(&spec)).unwrap();
    // odometer-or-identity selector over the full shift
    let sel = dir.path().join("sel.toml");
    write(
        &sel,
        "kind = \"odometer-selector\"\nfiber_bases = [2, 2, 2, 2, 2, 2, 2, 2]\n\n[cells]\n\"0\" = \"hold\"\n\"1\" = \"advance\"\n",
    );
    let spec = CocycleSpec::load(&sel).unwrap();
    let sys = build_system("full-shift:2", Some(&spec)).unwrap();
    let p = parse_point(&sys, "0110;0,0,0,0,0,0,0,0").unwrap();
    assert_eq!(format_point(&p), "0110;0,0,0,0,0,0,0,0");
}

#[test]
fn descriptor_errors_are_loud() {
    let dir = tempfile::tempdir().unwrap();
    // wrong permutation length
    let bad = dir.path().join("bad.toml");
    write(&bad, "kind = \"permutation\"\nfiber_size = 2\n\n[cells]\n\"0\" = \"012\"\n\"1\" = \"10\"\n");
    let spec = CocycleSpec::load(&bad).unwrap();
    assert!(spec.apply(parse_system("chacon").unwrap()).is_err());
    // non-bijective table
    let dup = dir.path().join("dup.toml");
    write(&dup, "kind = \"permutation\"\nfiber_size = 2\n\n[cells]\n\"0\" = \"00\"\n\"1\" = \"10\"\n");
    let spec = CocycleSpec::load(&dup).unwrap();
    assert!(spec.apply(parse_system("chacon").unwrap()).is_err());
    // incomplete cell cover
    let missing = dir.path().join("missing.toml");
    write(&missing, "kind = \"permutation\"\nfiber_size = 2\n\n[cells]\n\"0\" = \"01\"\n");
    let spec = CocycleSpec::load(&missing).unwrap();
    assert!(spec.apply(parse_system("chacon").unwrap()).is_err());
}

#[test]
fn point_literals_round_trip() {
    let shift = parse_system("full-shift:2").unwrap();
    let p = parse_point(&shift, "00101").unwrap();
    assert_eq!(format_point(&p), "00101");
    let odo = parse_system("odometer:2,3,5").unwrap();
    let p = parse_point(&odo, "1,2,4").unwrap();
    assert_eq!(format_point(&p), "1,2,4");
    assert!(parse_point(&odo, "2,0,0").is_err(), "digit outside base");
    let rot = parse_system("rotation:0.41421356").unwrap();
    let p = parse_point(&rot, "0.25").unwrap();
    assert_eq!(format_point(&p), "0.25");
    let ext = parse_system("circle-ext:k=3").unwrap();
    let p = parse_point(&ext, "0.3@2").unwrap();
    assert!(format_point(&p).contains(';'));
}

#[test]
fn catalog_names_the_standard_systems() {
    let text = catalog_text();
    for needle in [
        "full-shift:<k>",
        "weakly mixing; not minimal",
        "chacon",
        "minimal; weakly mixing",
        "odometer:",
        "distal",
        "circle-ext:k=",
        "extension example",
        "asserted from literature",
    ] {
        assert!(text.contains(needle), "catalog misses '{needle}'");
    }
}

#[test]
fn binary_chain_subcommand_dumps_a_record() {
    let dir = tempfile::tempdir().unwrap();
    write(&dir.path().join("swap.toml"), swap_cocycle_toml());
    let out = dir.path().join("chain.jsonl");
    let x = "01".repeat(300);
    let y = format!("{}{}", "01".repeat(150), "00".repeat(150));
    let status = Command::new(env!("CARGO_BIN_EXE_liyorke"))
        .current_dir(dir.path())
        .args(["chain", "--system", "full-shift:2", "--cocycle", "swap.toml"])
        .args(["--x", &x, "--y", &y])
        .args(["--eta", "0.25", "--horizon", "500"])
        .args(["--out"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let text = fs::read_to_string(&out).unwrap();
    let row: serde_json::Value = serde_json::from_str(text.lines().nth(1).unwrap()).unwrap();
    assert!(row["payload"]["cardinality"].as_u64().unwrap() >= 1);
}

#[test]
fn return_period_operation() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = load_config(
        dir.path(),
        "rp.toml",
        "id = \"rp\"\nsystem = \"odometer:2,3,2,2\"\noperation = \"return-period\"\n\n[params]\ndelta = 0.3\n",
    );
    let report = run_config(&cfg).unwrap();
    assert_eq!(report.rows[0]["payload"]["period"], serde_json::json!(6));
}

#[test]
fn output_directory_env_var_is_honored() {
    let cfg = ExperimentConfig {
        id: "envtest".into(),
        system: "chacon".into(),
        operation: "classify-pair".into(),
        seed: None,
        cocycle: None,
        cocycle_spec: None,
        output: None,
        params: Default::default(),
    };
    std::env::set_var(liyorke_cli::OUT_DIR_ENV, "/tmp/liyorke-out");
    let path = liyorke_cli::resolve_output(&cfg);
    std::env::remove_var(liyorke_cli::OUT_DIR_ENV);
    assert_eq!(path, std::path::PathBuf::from("/tmp/liyorke-out/envtest.jsonl"));
    assert_eq!(liyorke_cli::resolve_output(&cfg), std::path::PathBuf::from("envtest.jsonl"));
}
