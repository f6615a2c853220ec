use std::path::Path;
use std::process::{Command, Output};

const DEMO_CONFIG: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../../configs/demo.toml");

fn flbench(run_dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flbench"))
        .args(["--config", DEMO_CONFIG])
        .arg("--run-dir")
        .arg(run_dir)
        .args(["--models", "mock:oracle", "--kinds", "OperatorSwap", "--quartiles", "Q2"])
        .args(args)
        .env("RUST_LOG", "warn")
        .output()
        .expect("binary runs")
}

#[test]
fn stage_order_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let run = dir.path().join("run");

    let out = flbench(&run, &["mutate"]);
    assert_eq!(out.status.code(), Some(14), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stderr).contains("verdicts"));

    let out = flbench(&run, &["--min-loc", "0", "ingest"]);
    assert_eq!(out.status.code(), Some(3), "changed config on an existing run");

    let out = flbench(&run, &["ingest"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("ingest: 30 new"));
    let again = flbench(&run, &["ingest"]);
    assert!(String::from_utf8_lossy(&again.stdout).starts_with("ingest: 0 new, 30 already present"));
}

#[test]
fn usage_and_config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "seed = 1\nunknown_key = true\n").unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_flbench"))
        .args(["--config", bad.to_str().unwrap(), "ingest"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown_key"), "{}", String::from_utf8_lossy(&out.stderr));

    let out = flbench(dir.path(), &["--strengths", "9", "ingest"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("strength"));

    let out = flbench(dir.path(), &["--kinds", "NoSuchKind", "ingest"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn shipped_configs_validate() {
    for name in ["demo.toml", "live.example.toml"] {
        let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name);
        let config = flbench_core::pipeline::RunConfig::load(&path).unwrap_or_else(|e| panic!("{name}: {e}"));
        config.validate().unwrap_or_else(|e| panic!("{name}: {e}"));
        for model in &config.evaluate.models {
            config.model(model).unwrap_or_else(|e| panic!("{name}: {e}"));
        }
    }
}
