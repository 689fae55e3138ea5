//! `hocl simulate` — run one reference scenario and write its artifacts.

use crate::manifest::RunManifest;
use crate::output::{create_dir, load_config, to_pretty_json, write_atomic};
use crate::{CliError, CliResult, ScenarioArg};
use hocl_core::oscillator::compatibility;
use hocl_core::scenarios::{
    run_fig2, run_fig3, run_fig4, Fig4Output, ProjectedRow, ScenarioConfig, ScenarioId,
    ScenarioOutput,
};
use hocl_core::trace::{format_float, FinalState};
use serde::Serialize;
use std::path::Path;
use std::time::Instant;

pub fn run(
    scenario: ScenarioArg,
    seed: Option<u64>,
    steps: Option<usize>,
    out_dir: &Path,
    config_path: Option<&Path>,
) -> CliResult<()> {
    let (expected_id, preset) = match scenario {
        ScenarioArg::Fig2 => (ScenarioId::Fig2Timescale, ScenarioConfig::fig2_default()),
        ScenarioArg::Fig3 => (ScenarioId::Fig3Coupling, ScenarioConfig::fig3_default()),
        ScenarioArg::Fig4 => (ScenarioId::Fig4Basin, ScenarioConfig::fig4_default()),
    };
    let mut cfg: ScenarioConfig = match config_path {
        Some(path) => load_config(path)?,
        None => preset,
    };
    if cfg.scenario != expected_id {
        return Err(CliError::Usage(format!(
            "config file is for scenario {:?}, but {:?} was requested",
            cfg.scenario.name(),
            expected_id.name()
        )));
    }
    if let Some(s) = seed {
        cfg.seed = s;
    }
    if let Some(s) = steps {
        cfg.steps = s;
    }
    cfg.validate().map_err(CliError::from)?;
    create_dir(out_dir)?;

    let started = Instant::now();
    match cfg.scenario {
        ScenarioId::Fig2Timescale => {
            let out = run_fig2(&cfg).map_err(CliError::from)?;
            write_single(&cfg, &out, out_dir, started)
        }
        ScenarioId::Fig3Coupling => {
            let out = run_fig3(&cfg).map_err(CliError::from)?;
            write_single(&cfg, &out, out_dir, started)
        }
        ScenarioId::Fig4Basin => {
            let out = run_fig4(&cfg).map_err(CliError::from)?;
            write_fig4(&cfg, &out, out_dir, started)
        }
        ScenarioId::ToyTraining => {
            Err(CliError::Usage("toy_training runs through `hocl train`".into()))
        }
    }
}

/// Smallest pairwise compatibility over the drawn frequencies; a diagnostic
/// for how far the ensemble sits from the identical-frequency analysis.
fn kernel_c_min(frequencies: &[f64], sigma_c: f64) -> f64 {
    let mut c_min = 1.0f64;
    for (i, &wi) in frequencies.iter().enumerate() {
        for &wj in &frequencies[i + 1..] {
            c_min = c_min.min(compatibility(wi, wj, sigma_c));
        }
    }
    c_min
}

fn single_summary(cfg: &ScenarioConfig, out: &ScenarioOutput) -> serde_json::Value {
    let last = out.trace.rows.last().expect("steps >= 1");
    serde_json::json!({
        "final_r": last.r,
        "final_frob_w": last.frob_w,
        "final_v_total": last.v_total,
        "gate_open_step": out.trace.gate_open_step(cfg.r_c),
        "synchronized": last.r > cfg.r_c,
        "kernel_c_min": kernel_c_min(&out.final_state.frequencies, cfg.sigma_c),
        "cluster_partition": out.final_state.cluster_partition,
    })
}

fn write_single(
    cfg: &ScenarioConfig,
    out: &ScenarioOutput,
    dir: &Path,
    started: Instant,
) -> CliResult<()> {
    write_atomic(&dir.join("trace.csv"), out.trace.to_csv_string().as_bytes())?;
    write_atomic(&dir.join("final_state.json"), &to_pretty_json(&out.final_state))?;
    let manifest = RunManifest::new(
        "simulate",
        cfg.scenario.name(),
        cfg.seed,
        serde_json::to_value(cfg).expect("config serializes"),
        vec!["trace.csv".into(), "final_state.json".into()],
        started.elapsed().as_secs_f64(),
        single_summary(cfg, out),
    );
    write_atomic(&dir.join("manifest.json"), &to_pretty_json(&manifest))?;
    let last = out.trace.rows.last().expect("steps >= 1");
    println!(
        "{}: {} steps, final r = {:.4}, final ||W||_F = {:.4}, outputs in {}",
        cfg.scenario.name(),
        cfg.steps,
        last.r,
        last.frob_w,
        dir.display()
    );
    Ok(())
}

#[derive(Serialize)]
struct Fig4FinalStates<'a> {
    trajectories: Vec<&'a FinalState>,
}

fn projected_csv(projected: &[Vec<ProjectedRow>]) -> String {
    let mut s = String::from("traj,t,w_norm,phi_bar,v_total\n");
    for (k, rows) in projected.iter().enumerate() {
        for row in rows {
            s.push_str(&format!(
                "{k},{},{},{},{}\n",
                row.t,
                format_float(row.w_norm),
                format_float(row.phi_bar),
                format_float(row.v_total)
            ));
        }
    }
    s
}

fn surface_csv(surface: &hocl_core::scenarios::SurfaceGrid) -> String {
    let mut s = String::from("w_norm,phi_bar,v_total\n");
    for (i, &w) in surface.w_values.iter().enumerate() {
        for (j, &phi) in surface.phi_values.iter().enumerate() {
            s.push_str(&format!(
                "{},{},{}\n",
                format_float(w),
                format_float(phi),
                format_float(surface.values[i][j])
            ));
        }
    }
    s
}

fn write_fig4(cfg: &ScenarioConfig, out: &Fig4Output, dir: &Path, started: Instant) -> CliResult<()> {
    let mut outputs = Vec::new();
    for (k, traj) in out.trajectories.iter().enumerate() {
        let name = if k == 0 { "trace.csv".to_string() } else { format!("trace_traj{k}.csv") };
        write_atomic(&dir.join(&name), traj.trace.to_csv_string().as_bytes())?;
        outputs.push(name);
    }
    write_atomic(&dir.join("projected.csv"), projected_csv(&out.projected).as_bytes())?;
    outputs.push("projected.csv".into());
    write_atomic(&dir.join("surface.csv"), surface_csv(&out.surface).as_bytes())?;
    outputs.push("surface.csv".into());
    let finals = Fig4FinalStates {
        trajectories: out.trajectories.iter().map(|t| &t.final_state).collect(),
    };
    write_atomic(&dir.join("final_state.json"), &to_pretty_json(&finals))?;
    outputs.push("final_state.json".into());

    let (w_min, phi_min, v_min) = out.surface.minimum();
    let per_traj: Vec<serde_json::Value> = out
        .trajectories
        .iter()
        .zip(&out.projected)
        .map(|(traj, proj)| {
            let last_row = traj.trace.rows.last().expect("steps >= 1");
            let last_proj = proj.last().expect("steps >= 1");
            serde_json::json!({
                "final_r": last_row.r,
                "final_frob_w": last_row.frob_w,
                "final_v_total": last_row.v_total,
                "final_w_norm": last_proj.w_norm,
                "final_phi_bar": last_proj.phi_bar,
                "synchronized": last_row.r > cfg.r_c,
            })
        })
        .collect();
    let summary = serde_json::json!({
        "trajectories": per_traj,
        "surface_minimum": { "w_norm": w_min, "phi_bar": phi_min, "v_total": v_min },
        "kernel_c_min": kernel_c_min(&out.trajectories[0].final_state.frequencies, cfg.sigma_c),
    });
    let manifest = RunManifest::new(
        "simulate",
        cfg.scenario.name(),
        cfg.seed,
        serde_json::to_value(cfg).expect("config serializes"),
        outputs,
        started.elapsed().as_secs_f64(),
        summary,
    );
    write_atomic(&dir.join("manifest.json"), &to_pretty_json(&manifest))?;
    println!(
        "{}: {} trajectories x {} steps, surface minimum V = {:.4} at (w, phi) = ({w_min}, {phi_min}), outputs in {}",
        cfg.scenario.name(),
        cfg.trajectories,
        cfg.steps,
        v_min,
        dir.display()
    );
    Ok(())
}
