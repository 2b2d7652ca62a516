mod common;

use std::process::Command;

fn vcert(args: &[&str], out: &std::path::Path) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_vcert"))
        .arg("--config")
        .arg(common::crate_dir().join("data/synthetic.toml"))
        .arg("--out")
        .arg(out)
        .args(args)
        .env_remove("RUST_LOG")
        .output()
        .unwrap()
}

#[test]
fn subcommands_in_order() {
    let dir = tempfile::tempdir().unwrap();
    for stage in ["ingest", "score", "features", "network", "analyze", "report"] {
        let o = vcert(&[stage], dir.path());
        assert!(o.status.success(), "{stage}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(dir.path().join(stage).join("manifest.json").exists());
    }
    assert!(dir.path().join("report/fig4c_region_averages.json").exists());
}

#[test]
fn missing_upstream_reports_json_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = vcert(&["network"], dir.path());
    assert!(!o.status.success());
    let stderr = String::from_utf8(o.stderr).unwrap();
    let line = stderr.lines().last().unwrap();
    let v: serde_json::Value = serde_json::from_str(line).unwrap();
    assert_eq!(v["error"], "stage");
    assert_eq!(v["stage"], "ingest");
    assert!(v["message"].as_str().unwrap().contains("vcert ingest"));
}

#[test]
fn init_config_round_trips() {
    let o = Command::new(env!("CARGO_BIN_EXE_vcert")).args(["init-config", "corpus.jsonl"]).output().unwrap();
    assert!(o.status.success());
    let cfg = verbal_certainty::pipeline::RunConfig::from_toml(&String::from_utf8(o.stdout).unwrap()).unwrap();
    assert_eq!(cfg.paths.corpus, std::path::PathBuf::from("corpus.jsonl"));
}
