use std::path::Path;
use std::process::{Command, Output};

fn polaring(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polaring")).args(args).env("RUST_LOG", "warn").output().unwrap()
}

fn listed(out: &Output) -> Vec<String> {
    String::from_utf8_lossy(&out.stdout).lines().map(str::to_owned).collect()
}

#[test]
fn dump_model_writes_listed_files() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("model");
    let out = polaring(&["dump-model", "--output", dir.to_str().unwrap(), "--sigma-e", "100"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let files = listed(&out);
    assert!(!files.is_empty());
    assert!(files.iter().all(|f| Path::new(f).is_file()), "{files:?}");
}

#[test]
fn statics_run_then_collision_then_force() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("statics");
    let args = ["statics", "--output", dir.to_str().unwrap(), "--ensemble", "20", "--sigma-e", "300", "--threads", "1"];
    let first = polaring(&args);
    assert_eq!(first.status.code(), Some(0), "{}", String::from_utf8_lossy(&first.stderr));
    assert!(dir.join("manifest.json").is_file());
    let again = polaring(&args);
    assert_eq!(again.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&again.stderr).starts_with("error:"));
    let mut forced = args.to_vec();
    forced.push("--force");
    assert_eq!(polaring(&forced).status.code(), Some(0));
}

#[test]
fn config_file_selects_the_experiment() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("run.toml");
    let dir = tmp.path().join("out");
    std::fs::write(
        &cfg,
        "experiment = \"msd\"\nensemble_size = 2\n[integrator]\nt_max_fs = 6.0\nrecord_stride = 4\n[analysis]\nsteady_window_fs = [3.0, 6.0]\nmsd_fit_window_fs = [1.0, 5.0]\n",
    )
    .unwrap();
    let out = polaring(&["run", "--config", cfg.to_str().unwrap(), "--output", dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(listed(&out).iter().any(|f| f.ends_with(".csv")));
}

#[test]
fn invalid_input_exits_with_code_two() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("x");
    let d = dir.to_str().unwrap();
    assert_eq!(polaring(&["statics", "--output", d, "--sigma-e", "-1"]).status.code(), Some(2));
    assert_eq!(polaring(&["figure", "fig99", "--output", d]).status.code(), Some(2));
    assert_eq!(polaring(&["statics", "--no-such-flag"]).status.code(), Some(2));
    let bad = tmp.path().join("bad.toml");
    std::fs::write(&bad, "[bath]\nomega_zero = 1\n").unwrap();
    assert_eq!(polaring(&["run", "--config", bad.to_str().unwrap(), "--output", d]).status.code(), Some(2));
    assert!(!dir.exists() || std::fs::read_dir(&dir).unwrap().next().is_none());
}
