//! `hocl bench` — per-step scaling measurement.
//!
//! Times one full forward step (T_sync sparse phase updates, local
//! attention, attention-weighted message passing, gated Hebbian update over
//! the graph edges) at each ensemble size, with the naive O(n²) graph
//! construction timed separately, and fits the exponent of step time vs n.
//! With a fixed neighborhood cap the per-step work is Θ(n·k), so the fitted
//! exponent sits near 1.
//!
//! Timing runs with internal parallelism disabled: rayon dispatch overhead
//! at small n would contaminate the scaling fit. Parallel speedups are the
//! criterion bench suite's job (`cargo bench -p hocl-core`).

use crate::manifest::RunManifest;
use crate::output::{create_dir, to_pretty_json, write_atomic};
use crate::{CliError, CliResult};
use hocl_core::exec;
use hocl_core::geometry::project_to_ball;
use hocl_core::graph::{build_graph, SparseGraph};
use hocl_core::oscillator::{
    euler_phase_step, local_attention_matrix, order_parameter, CouplingVariant, OscillatorState,
};
use hocl_core::plasticity::{
    hebbian_step_in_place, EdgeScope, GateMode, HebbianOptions, PlasticityParams, WeightMatrix,
};
use hocl_core::rng::DeterministicRng;
use std::path::Path;
use std::time::Instant;

const EMBED_DIM: usize = 4;
const INPUT_DIM: usize = 8;
const T_SYNC: usize = 5;
const DT: f64 = 0.01;

struct BenchCase {
    state: OscillatorState,
    graph: SparseGraph,
    weights: WeightMatrix,
    inputs: Vec<Vec<f64>>,
    params: PlasticityParams,
    points: Vec<hocl_core::geometry::PoincarePoint>,
    k_cap: usize,
}

fn setup(n: usize, k_cap: usize, seed: u64) -> BenchCase {
    let mut rng = DeterministicRng::new(seed);
    let points: Vec<_> = (0..n)
        .map(|_| {
            let c: Vec<f64> = (0..EMBED_DIM).map(|_| rng.normal() * 0.3).collect();
            project_to_ball(&c).expect("finite coordinates")
        })
        .collect();
    // delta far beyond any pairwise distance: the cap alone sets |N_i| = k
    let graph = build_graph(&points, 1e9, Some(k_cap)).expect("valid graph");
    let phases: Vec<f64> = (0..n).map(|_| rng.phase()).collect();
    let mut freqs: Vec<f64> = (0..n).map(|_| rng.normal()).collect();
    let mean = freqs.iter().sum::<f64>() / n as f64;
    for f in &mut freqs {
        *f -= mean;
    }
    let state = OscillatorState::new(phases, freqs, 2.0, 1.0).expect("valid state");
    let weights = WeightMatrix::random_symmetric(n, 0.05, &mut rng);
    let inputs: Vec<Vec<f64>> =
        (0..n).map(|_| (0..INPUT_DIM).map(|_| rng.normal()).collect()).collect();
    let params =
        PlasticityParams::new(0.01, 0.001, 0.5, 20.0, GateMode::Smooth).expect("valid params");
    BenchCase { state, graph, weights, inputs, params, points, k_cap }
}

/// One full per-step unit of work (everything but graph construction).
fn forward_step(case: &mut BenchCase) {
    for _ in 0..T_SYNC {
        case.state =
            euler_phase_step(&case.state, DT, CouplingVariant::SparseLocal, Some(&case.graph))
                .expect("valid step");
    }
    let attention = local_attention_matrix(&case.state, &case.graph).expect("consistent sizes");
    let n = case.inputs.len();
    let mut activations = Vec::with_capacity(n);
    for i in 0..n {
        let mut h = [0.0f64; INPUT_DIM];
        for &(j, a) in attention.row(i) {
            let w_ij = case.weights.get(i, j);
            for (hc, xc) in h.iter_mut().zip(&case.inputs[j]) {
                *hc += a * w_ij * xc;
            }
        }
        let norm_sq: f64 = h.iter().map(|c| {
            let v = c.max(0.0);
            v * v
        }).sum();
        activations.push(norm_sq.sqrt().tanh());
    }
    let (r, _) = order_parameter(case.state.phases()).expect("nonempty");
    hebbian_step_in_place(
        &mut case.weights,
        &activations,
        r,
        &case.params,
        EdgeScope::Graph(&case.graph),
        &HebbianOptions::default(),
    )
    .expect("bounded activations");
}

fn median(samples: &mut [f64]) -> f64 {
    samples.sort_by(|a, b| a.partial_cmp(b).expect("finite timings"));
    let mid = samples.len() / 2;
    if samples.len() % 2 == 1 {
        samples[mid]
    } else {
        0.5 * (samples[mid - 1] + samples[mid])
    }
}

fn fit_log_slope(ns: &[usize], times: &[f64]) -> f64 {
    let xs: Vec<f64> = ns.iter().map(|&n| (n as f64).ln()).collect();
    let ys: Vec<f64> = times.iter().map(|&t| t.ln()).collect();
    let xm = xs.iter().sum::<f64>() / xs.len() as f64;
    let ym = ys.iter().sum::<f64>() / ys.len() as f64;
    let num: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - xm) * (y - ym)).sum();
    let den: f64 = xs.iter().map(|x| (x - xm) * (x - xm)).sum();
    num / den
}

pub fn run(sizes: &[usize], k_cap: usize, reps: usize, seed: u64, out_dir: &Path) -> CliResult<()> {
    if sizes.is_empty() {
        return Err(CliError::Usage("n list must not be empty".into()));
    }
    if sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CliError::Usage("n values must be strictly ascending".into()));
    }
    if k_cap < 1 {
        return Err(CliError::Usage("k must be >= 1".into()));
    }
    if reps < 1 {
        return Err(CliError::Usage("reps must be >= 1".into()));
    }
    create_dir(out_dir)?;
    // the scaling fit runs sequentially; see the module docs
    exec::set_parallel(false);

    let started = Instant::now();
    let mut step_ns = Vec::with_capacity(sizes.len());
    let mut graph_ns = Vec::with_capacity(sizes.len());
    for (i, &n) in sizes.iter().enumerate() {
        let mut case = setup(n, k_cap, seed.wrapping_add(i as u64));

        // naive O(n^2) graph construction, timed separately
        let graph_reps = reps.min(2);
        let mut samples = Vec::with_capacity(graph_reps);
        for rep in 0..=graph_reps {
            let t0 = Instant::now();
            let g = build_graph(&case.points, 1e9, Some(case.k_cap)).expect("valid graph");
            let dt = t0.elapsed().as_nanos() as f64;
            if rep > 0 {
                samples.push(dt);
            }
            case.graph = g;
        }
        let g_ns = median(&mut samples);

        // calibrate the batch size toward ~100 ms per rep so single-step
        // jitter cannot dominate the medians
        let t0 = Instant::now();
        forward_step(&mut case);
        let one = t0.elapsed().as_secs_f64().max(1e-9);
        let iters = ((0.1 / one).round() as usize).clamp(1, 500);

        let mut samples = Vec::with_capacity(reps);
        for rep in 0..=reps {
            let t0 = Instant::now();
            for _ in 0..iters {
                forward_step(&mut case);
            }
            let per_step = t0.elapsed().as_nanos() as f64 / iters as f64;
            if rep > 0 {
                samples.push(per_step);
            }
        }
        let s_ns = median(&mut samples);
        println!("n = {n}: step {s_ns:.0} ns (x{iters} per rep), graph build {g_ns:.0} ns");
        step_ns.push(s_ns);
        graph_ns.push(g_ns);
    }

    let exponent = if sizes.len() >= 2 { fit_log_slope(sizes, &step_ns) } else { f64::NAN };
    println!("fitted step-time exponent: {exponent:.3}");

    let mut csv = String::from("n,step_ns,graph_build_ns\n");
    for ((&n, &s), &g) in sizes.iter().zip(&step_ns).zip(&graph_ns) {
        csv.push_str(&format!("{n},{s},{g}\n"));
    }
    write_atomic(&out_dir.join("bench.csv"), csv.as_bytes())?;

    let summary = serde_json::json!({
        "exponent": exponent,
        "points": sizes.iter().zip(&step_ns).zip(&graph_ns)
            .map(|((&n, &s), &g)| serde_json::json!({"n": n, "step_ns": s, "graph_build_ns": g}))
            .collect::<Vec<_>>(),
    });
    let config = serde_json::json!({
        "n": sizes,
        "k": k_cap,
        "reps": reps,
        "seed": seed,
        "t_sync": T_SYNC,
        "dt": DT,
        "embed_dim": EMBED_DIM,
        "input_dim": INPUT_DIM,
    });
    let manifest = RunManifest::new(
        "bench",
        "bench",
        seed,
        config,
        vec!["bench.csv".into()],
        started.elapsed().as_secs_f64(),
        summary,
    );
    write_atomic(&out_dir.join("manifest.json"), &to_pretty_json(&manifest))?;
    Ok(())
}
