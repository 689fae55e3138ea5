//! `hocl train` — toy training run on the synthetic regression task.

use crate::manifest::RunManifest;
use crate::output::{create_dir, load_config, to_pretty_json, write_atomic};
use crate::{CliError, CliResult};
use hocl_core::model::{train, HoclModel, TrainConfig, TrainMetrics};
use hocl_core::trace::format_float;
use serde::Serialize;
use std::path::Path;
use std::time::Instant;

pub const TRAIN_TRACE_HEADER: &str = "iter,loss,r,gate,v_total,frob_w,density";

fn trace_csv(rows: &[TrainMetrics]) -> String {
    let mut s = String::from(TRAIN_TRACE_HEADER);
    s.push('\n');
    for m in rows {
        s.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            m.iter,
            format_float(m.loss),
            format_float(m.r),
            format_float(m.gate),
            format_float(m.v_total),
            format_float(m.frob_w),
            format_float(m.density),
        ));
    }
    s
}

#[derive(Serialize)]
struct TrainFinalState {
    embeddings: Vec<Vec<f64>>,
    phases: Vec<f64>,
    frequencies: Vec<f64>,
    weights: hocl_core::plasticity::WeightMatrix,
    projection: Vec<Vec<f64>>,
    output_weights: Vec<Vec<f64>>,
}

pub fn run(config_path: Option<&Path>, out_dir: &Path) -> CliResult<()> {
    let cfg: TrainConfig = match config_path {
        Some(path) => load_config(path)?,
        None => TrainConfig::toy_default(),
    };
    cfg.validate().map_err(CliError::from)?;
    create_dir(out_dir)?;

    let started = Instant::now();
    let (mut model, task) = HoclModel::init(cfg.clone()).map_err(CliError::from)?;
    let rows = train(&mut model, &task, cfg.max_iters, cfg.epsilon_conv).map_err(CliError::from)?;

    write_atomic(&out_dir.join("trace.csv"), trace_csv(&rows).as_bytes())?;
    let final_state = TrainFinalState {
        embeddings: model.embeddings().iter().map(|z| z.coords().to_vec()).collect(),
        phases: model.oscillator().phases().to_vec(),
        frequencies: model.oscillator().frequencies().to_vec(),
        weights: model.weights().clone(),
        projection: model.projection().to_vec(),
        output_weights: model.output_weights().to_vec(),
    };
    write_atomic(&out_dir.join("final_state.json"), &to_pretty_json(&final_state))?;

    let first = rows.first().expect("max_iters >= 1 ran at least one iteration");
    let last = rows.last().expect("nonempty");
    let converged = rows.len() < cfg.max_iters
        || rows.last().map(|m| m.delta_v < cfg.epsilon_conv).unwrap_or(false);
    let summary = serde_json::json!({
        "iterations": rows.len(),
        "loss_initial": first.loss,
        "loss_final": last.loss,
        "loss_reduction": 1.0 - last.loss / first.loss,
        "final_r": last.r,
        "final_frob_w": last.frob_w,
        "final_v_total": last.v_total,
        "converged_by_epsilon": converged,
    });
    let manifest = RunManifest::new(
        "train",
        "toy_training",
        cfg.seed,
        serde_json::to_value(&cfg).expect("config serializes"),
        vec!["trace.csv".into(), "final_state.json".into()],
        started.elapsed().as_secs_f64(),
        summary,
    );
    write_atomic(&out_dir.join("manifest.json"), &to_pretty_json(&manifest))?;
    println!(
        "train: {} iterations, loss {:.6} -> {:.6} ({:.1}% reduction), outputs in {}",
        rows.len(),
        first.loss,
        last.loss,
        100.0 * (1.0 - last.loss / first.loss),
        out_dir.display()
    );
    Ok(())
}
