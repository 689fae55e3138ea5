//! CLI contract tests: exit codes, config handling, output files.

use std::path::Path;
use std::process::{Command, Output};

fn hocl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hocl")).args(args).output().expect("binary runs")
}

fn read(dir: &Path, name: &str) -> Vec<u8> {
    std::fs::read(dir.join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

#[test]
fn unknown_scenario_exits_2_with_usage() {
    let out = hocl(&["simulate", "fig9"]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("fig2"), "usage should list valid scenarios: {stderr}");
}

#[test]
fn missing_bounds_flag_exits_2() {
    let out = hocl(&["bounds", "--eps", "0.01"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unwritable_output_dir_exits_3() {
    let out = hocl(&["simulate", "fig3", "--steps", "5", "--out", "/proc/nope/out"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn bad_config_exits_2_naming_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = serde_json::to_value(hocl_core::model::TrainConfig::toy_default()).unwrap();
    cfg["gamma"] = serde_json::json!(-1.0);
    let cfg_path = dir.path().join("bad.json");
    std::fs::write(&cfg_path, serde_json::to_string(&cfg).unwrap()).unwrap();
    let out = hocl(&["train", "--config", cfg_path.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("gamma"), "stderr should name the field: {stderr}");
}

#[test]
fn config_scenario_mismatch_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = hocl_core::scenarios::ScenarioConfig::fig3_default();
    let cfg_path = dir.path().join("fig3.json");
    std::fs::write(&cfg_path, serde_json::to_string(&cfg).unwrap()).unwrap();
    let out = hocl(&["simulate", "fig2", "--config", cfg_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bounds_prints_the_analytic_values() {
    let out = hocl(&[
        "bounds", "--eps", "0.01", "--sigma-c", "1", "--k", "2", "--n", "50", "--eta", "0.01",
        "--m", "1", "--gamma", "0.001",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).expect("json on stdout");
    let sep = v["separation_bound"].as_f64().unwrap();
    let wb = v["weight_bound"].as_f64().unwrap();
    let lc = v["kernel_lipschitz"].as_f64().unwrap();
    assert!((sep - 1.6484e-4).abs() < 1e-7, "separation bound {sep}");
    assert!((wb - 500.0).abs() < 1e-9, "weight bound {wb}");
    assert!((lc - 0.6065306597126334).abs() < 1e-12, "kernel Lipschitz {lc}");
}

#[test]
fn simulate_writes_the_contracted_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = hocl(&["simulate", "fig3", "--steps", "50", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let trace = String::from_utf8(read(dir.path(), "trace.csv")).unwrap();
    assert!(trace.starts_with("t,r,gate,mean_abs_dtheta,mean_abs_dw,frob_w,v_theta,v_w,v_total\n"));
    assert_eq!(trace.lines().count(), 51, "header + one row per step");
    let fs: serde_json::Value = serde_json::from_slice(&read(dir.path(), "final_state.json")).unwrap();
    assert_eq!(fs["phases"].as_array().unwrap().len(), 8);
    assert_eq!(fs["frequencies"].as_array().unwrap().len(), 8);
    assert!(fs["weights"]["w"].as_array().unwrap().len() == 64, "row-major 8x8");
    assert!(fs["cluster_labels"].as_array().is_some());
    let manifest: serde_json::Value =
        serde_json::from_slice(&read(dir.path(), "manifest.json")).unwrap();
    assert_eq!(manifest["config"]["steps"], 50);
    assert_eq!(manifest["seed"], 123);
    assert!(manifest["summary"]["final_r"].as_f64().is_some());
}

#[test]
fn rerun_from_manifest_reproduces_bytes() {
    let dir_a = tempfile::tempdir().unwrap();
    let dir_b = tempfile::tempdir().unwrap();
    let out = hocl(&[
        "simulate", "fig3", "--steps", "80", "--seed", "7", "--out",
        dir_a.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let manifest_path = dir_a.path().join("manifest.json");
    let out = hocl(&[
        "simulate", "fig3", "--config", manifest_path.to_str().unwrap(), "--out",
        dir_b.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(read(dir_a.path(), "trace.csv"), read(dir_b.path(), "trace.csv"));
    assert_eq!(read(dir_a.path(), "final_state.json"), read(dir_b.path(), "final_state.json"));
}

#[test]
fn train_writes_trace_with_contracted_columns() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = hocl_core::model::TrainConfig::toy_default();
    cfg.max_iters = 3;
    let cfg_path = dir.path().join("cfg.json");
    std::fs::write(&cfg_path, serde_json::to_string(&cfg).unwrap()).unwrap();
    let out = hocl(&[
        "train", "--config", cfg_path.to_str().unwrap(), "--out", dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let trace = String::from_utf8(read(dir.path(), "trace.csv")).unwrap();
    assert!(trace.starts_with("iter,loss,r,gate,v_total,frob_w,density\n"));
    assert_eq!(trace.lines().count(), 4);
}

#[test]
fn bench_rejects_non_ascending_sizes() {
    let out = hocl(&["bench", "--n", "512,256", "--k", "4", "--reps", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("ascending"), "stderr: {stderr}");
}

#[test]
fn bench_doubling_the_cap_increases_step_time() {
    let run = |k: &str| {
        let dir = tempfile::tempdir().unwrap();
        let out = hocl(&["bench", "--n", "1024", "--k", k, "--reps", "3", "--out", dir.path().to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        let manifest: serde_json::Value =
            serde_json::from_slice(&read(dir.path(), "manifest.json")).unwrap();
        manifest["summary"]["points"][0]["step_ns"].as_f64().unwrap()
    };
    let slim = run("8");
    let wide = run("32");
    assert!(wide > slim, "4x the edges must cost more: k=8 {slim} ns vs k=32 {wide} ns");
}

#[test]
fn train_is_identical_across_thread_modes() {
    // the finite-difference probes are the parallel-heaviest path; a thread
    // cap must not change a single byte
    let mut cfg = hocl_core::model::TrainConfig::toy_default();
    cfg.max_iters = 4;
    let run = |threads: &str| {
        let dir = tempfile::tempdir().unwrap();
        let cfg_path = dir.path().join("cfg.json");
        std::fs::write(&cfg_path, serde_json::to_string(&cfg).unwrap()).unwrap();
        let out = Command::new(env!("CARGO_BIN_EXE_hocl"))
            .args(["train", "--config", cfg_path.to_str().unwrap(), "--out", dir.path().to_str().unwrap()])
            .env("HOCL_THREADS", threads)
            .output()
            .expect("binary runs");
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        (read(dir.path(), "trace.csv"), read(dir.path(), "final_state.json"))
    };
    assert_eq!(run("1"), run("0"), "sequential and parallel training must agree bitwise");
}

#[test]
fn hocl_threads_env_caps_parallelism() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_hocl"))
        .args(["simulate", "fig4", "--steps", "30", "--out", dir.path().to_str().unwrap()])
        .env("HOCL_THREADS", "1")
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(0));
    let single = read(dir.path(), "trace.csv");

    let dir2 = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_hocl"))
        .args(["simulate", "fig4", "--steps", "30", "--out", dir2.path().to_str().unwrap()])
        .env("HOCL_THREADS", "0")
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(single, read(dir2.path(), "trace.csv"), "thread cap must not change results");
}
