use std::fs;
use std::path::Path;
use std::process::Command;

fn run(args: &[&str], config: Option<&str>, dir: &Path) -> i32 {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_anisodisp"));
    cmd.args(args).arg("--out").arg(dir.join("out"));
    if let Some(text) = config {
        let path = dir.join("run.toml");
        fs::write(&path, text).unwrap();
        cmd.arg("--config").arg(path);
    }
    cmd.output().unwrap().status.code().unwrap()
}

const SMALL_DECAY: &str = "[grid]\nn = 256\nl = 40.0\n\n[lin_decay]\nsamples = 8\n";

#[test]
fn unknown_experiment_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(&["no-such-experiment"], None, dir.path()), 2);
}

#[test]
fn unknown_config_field_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(&["lin-decay"], Some("[lin_decay]\nalpha = 1.0\nbogus = 3\n"), dir.path()), 2);
}

#[test]
fn lin_decay_writes_fitted_series() {
    let dir = tempfile::tempdir().unwrap();
    let code = run(&["lin-decay"], Some(SMALL_DECAY), dir.path());
    let out = dir.path().join("out");
    let csv = fs::read_to_string(out.join("decay.csv")).unwrap();
    assert!(csv.lines().next().unwrap().contains("fitted_slope"));
    assert_eq!(csv.lines().count(), 9);
    let summary = fs::read_to_string(out.join("summary.txt")).unwrap();
    assert!(summary.contains("config_hash"));
    assert!(summary.contains("result: "));
    assert!(code == 0 || code == 1, "exit {code}");
}

#[test]
fn impossible_slope_range_fails_checks() {
    let dir = tempfile::tempdir().unwrap();
    let config = format!("{SMALL_DECAY}slope_range = [5.0, 6.0]\n");
    assert_eq!(run(&["lin-decay"], Some(&config), dir.path()), 1);
    let summary = fs::read_to_string(dir.path().join("out/summary.txt")).unwrap();
    assert!(summary.contains("[FAIL]"));
}

#[test]
fn sweep_writes_trend_and_members() {
    let dir = tempfile::tempdir().unwrap();
    let config = "[grid]\nn = 32\nl = 20.0\n\n[sqg]\ndt = 0.05\nt_final = 1.0\n\n[sweep]\ntarget = \"sqg\"\neps = [0.02, 0.01]\n";
    let code = run(&["sweep", "--jobs", "2"], Some(config), dir.path());
    assert!(code == 0 || code == 1, "exit {code}");
    let out = dir.path().join("out");
    assert!(out.join("trend.csv").is_file());
    let members: Vec<_> = fs::read_dir(&out)
        .unwrap()
        .filter_map(|e| e.ok())
        .filter(|e| e.path().is_dir())
        .collect();
    assert_eq!(members.len(), 2);
    for m in members {
        assert!(m.path().join("summary.txt").is_file());
    }
}
