//! Full forward pass and the toy-scale training loop.
//!
//! One forward pass over N units: embed inputs into the ball through the
//! learned projection, build the sparse hyperbolic graph, integrate the
//! sparse-local phase dynamics for `t_sync` Euler steps, form the local
//! attention matrix, message-pass `h_i = σ_a(Σ_{j∈N_i} A_ij W_ij x_j)`, and
//! read off the global order parameter. With targets supplied the loss is a
//! per-unit linear readout `ŷ_i = u_i·h_i` against fixed random targets,
//! averaged over units.
//!
//! One training iteration in order: forward; central-finite-difference step
//! on the task parameters (projection P and per-unit readout weights U);
//! commit the synced phases; gate on the same iteration's order parameter
//! and apply the Hebbian step over the active edges; Riemannian update of
//! the embeddings; Lyapunov evaluation and the convergence delta |ΔV|.
//!
//! Gradient probes re-run the pipeline with the iteration's graph held
//! fixed, mirroring the loop structure (the topology is built once per
//! iteration, before the loss). The embeddings influence the loss only
//! through graph membership, so their within-iteration gradient — and hence
//! the probe result — is exactly zero away from topology boundaries;
//! probing across rebuilds would measure membership jumps instead of
//! derivatives. The readout weights sit below the whole pipeline and carry
//! the entire task gradient.

use crate::error::{Error, Result};
use crate::exec;
use crate::geometry::{embed_input, exp_map, riemannian_grad, PoincarePoint};
use crate::graph::{build_graph, density, SparseGraph};
use crate::oscillator::{
    euler_phase_step, local_attention_matrix, order_parameter, CouplingVariant, OscillatorState,
    SparseMatrix,
};
use crate::plasticity::{
    gate, hebbian_step_in_place, EdgeScope, GateMode, HebbianOptions, PlasticityParams,
    WeightMatrix,
};
use crate::rng::DeterministicRng;
use crate::stability::lyapunov;
use serde::{Deserialize, Serialize};

/// Pointwise activation σ_a of the message-passing step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Nonlinearity {
    Relu,
    Identity,
}

impl Nonlinearity {
    fn apply(self, x: f64) -> f64 {
        match self {
            Nonlinearity::Relu => x.max(0.0),
            Nonlinearity::Identity => x,
        }
    }
}

/// Complete description of a training run; everything the manifest must echo
/// to reproduce it byte-exactly.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrainConfig {
    pub n: usize,
    pub d: usize,
    pub d_in: usize,
    pub t_sync: usize,
    pub dt: f64,
    pub coupling: f64,
    pub sigma_c: f64,
    pub sigma_omega: f64,
    pub delta: f64,
    pub k_cap: Option<usize>,
    pub alpha_f: f64,
    pub alpha_s: f64,
    pub alpha_z: f64,
    pub lambda: f64,
    pub eta: f64,
    pub gamma: f64,
    pub beta: f64,
    pub r_c: f64,
    pub gate_mode: GateMode,
    pub nonlinearity: Nonlinearity,
    pub max_iters: usize,
    pub epsilon_conv: f64,
    pub h_fd: f64,
    pub seed: u64,
    pub w_init_sigma: f64,
    pub proj_init_sigma: f64,
    pub out_init_sigma: f64,
}

impl TrainConfig {
    /// Toy-scale defaults: 16 units, 4-dimensional ball, synthetic
    /// regression. `delta` is chosen so the threshold graph sits at roughly
    /// half density for the seeded embedding distribution.
    pub fn toy_default() -> Self {
        Self {
            n: 16,
            d: 4,
            d_in: 4,
            t_sync: 5,
            dt: 0.05,
            coupling: 2.0,
            sigma_c: 1.0,
            sigma_omega: 0.5,
            delta: 2.0,
            k_cap: None,
            alpha_f: 3.0,
            alpha_s: 1.0,
            alpha_z: 0.01,
            lambda: 0.1,
            eta: 0.01,
            gamma: 0.01,
            beta: 20.0,
            r_c: 0.5,
            gate_mode: GateMode::Smooth,
            nonlinearity: Nonlinearity::Relu,
            max_iters: 200,
            epsilon_conv: 1e-9,
            h_fd: 1e-5,
            seed: 42,
            w_init_sigma: 0.3,
            proj_init_sigma: 0.3,
            out_init_sigma: 0.1,
        }
    }

    /// Field-named validation, surfaced verbatim by the CLI.
    pub fn validate(&self) -> Result<()> {
        use crate::error::{ensure_non_negative, ensure_positive, ensure_unit_open};
        if self.n < 1 {
            return Err(Error::InvalidArgument("n must be >= 1".into()));
        }
        if self.d < 1 {
            return Err(Error::InvalidArgument("d must be >= 1".into()));
        }
        if self.d_in < 1 {
            return Err(Error::InvalidArgument("d_in must be >= 1".into()));
        }
        if self.t_sync < 1 {
            return Err(Error::InvalidArgument("t_sync must be >= 1".into()));
        }
        ensure_positive("dt", self.dt)?;
        ensure_positive("coupling", self.coupling)?;
        ensure_positive("sigma_c", self.sigma_c)?;
        ensure_non_negative("sigma_omega", self.sigma_omega)?;
        ensure_positive("delta", self.delta)?;
        if let Some(k) = self.k_cap {
            if k == 0 {
                return Err(Error::InvalidArgument("k_cap must be >= 1".into()));
            }
        }
        ensure_non_negative("alpha_f", self.alpha_f)?;
        ensure_non_negative("alpha_s", self.alpha_s)?;
        ensure_non_negative("alpha_z", self.alpha_z)?;
        ensure_positive("lambda", self.lambda)?;
        ensure_non_negative("eta", self.eta)?;
        ensure_positive("gamma", self.gamma)?;
        ensure_positive("beta", self.beta)?;
        ensure_unit_open("r_c", self.r_c)?;
        if self.max_iters < 1 {
            return Err(Error::InvalidArgument("max_iters must be >= 1".into()));
        }
        ensure_positive("epsilon_conv", self.epsilon_conv)?;
        ensure_positive("h_fd", self.h_fd)?;
        ensure_non_negative("w_init_sigma", self.w_init_sigma)?;
        ensure_non_negative("proj_init_sigma", self.proj_init_sigma)?;
        ensure_non_negative("out_init_sigma", self.out_init_sigma)?;
        Ok(())
    }
}

/// The fixed batch: one input vector and one scalar target per unit.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SyntheticTask {
    pub inputs: Vec<Vec<f64>>,
    pub targets: Vec<f64>,
}

/// Model state: hyperbolic embeddings, projection, per-unit readout weights,
/// oscillator ensemble, and structural weights.
#[derive(Clone, Debug)]
pub struct HoclModel {
    embeddings: Vec<PoincarePoint>,
    projection: Vec<Vec<f64>>,
    output_weights: Vec<Vec<f64>>,
    oscillator: OscillatorState,
    weights: WeightMatrix,
    plasticity: PlasticityParams,
    cfg: TrainConfig,
}

impl HoclModel {
    /// Seeds a model and its synthetic task. Draw order: inputs, targets,
    /// projection, readout weights, frequencies (centered), phases, weights.
    /// Embeddings start at `exp_0(P x_i)`.
    pub fn init(cfg: TrainConfig) -> Result<(Self, SyntheticTask)> {
        cfg.validate()?;
        let mut rng = DeterministicRng::new(cfg.seed);
        let inputs: Vec<Vec<f64>> =
            (0..cfg.n).map(|_| (0..cfg.d_in).map(|_| rng.normal()).collect()).collect();
        let targets: Vec<f64> = (0..cfg.n).map(|_| rng.normal()).collect();
        let projection: Vec<Vec<f64>> = (0..cfg.d)
            .map(|_| (0..cfg.d_in).map(|_| rng.normal() * cfg.proj_init_sigma).collect())
            .collect();
        let output_weights: Vec<Vec<f64>> = (0..cfg.n)
            .map(|_| (0..cfg.d_in).map(|_| rng.normal() * cfg.out_init_sigma).collect())
            .collect();
        let mut frequencies: Vec<f64> =
            (0..cfg.n).map(|_| rng.normal() * cfg.sigma_omega).collect();
        let mean = frequencies.iter().sum::<f64>() / cfg.n as f64;
        for f in &mut frequencies {
            *f -= mean;
        }
        let phases: Vec<f64> = (0..cfg.n).map(|_| rng.phase()).collect();
        let weights = WeightMatrix::random_symmetric(cfg.n, cfg.w_init_sigma, &mut rng);

        let embeddings: Vec<PoincarePoint> =
            inputs.iter().map(|x| embed_input(x, &projection)).collect::<Result<_>>()?;
        let oscillator = OscillatorState::new(phases, frequencies, cfg.coupling, cfg.sigma_c)?;
        let plasticity =
            PlasticityParams::new(cfg.eta, cfg.gamma, cfg.r_c, cfg.beta, cfg.gate_mode)?;
        Ok((
            Self { embeddings, projection, output_weights, oscillator, weights, plasticity, cfg },
            SyntheticTask { inputs, targets },
        ))
    }

    pub fn config(&self) -> &TrainConfig {
        &self.cfg
    }

    pub fn embeddings(&self) -> &[PoincarePoint] {
        &self.embeddings
    }

    pub fn projection(&self) -> &[Vec<f64>] {
        &self.projection
    }

    pub fn output_weights(&self) -> &[Vec<f64>] {
        &self.output_weights
    }

    pub fn oscillator(&self) -> &OscillatorState {
        &self.oscillator
    }

    pub fn weights(&self) -> &WeightMatrix {
        &self.weights
    }

    pub fn plasticity(&self) -> &PlasticityParams {
        &self.plasticity
    }

    /// Composite Lyapunov value of the current state.
    pub fn lyapunov_total(&self) -> Result<f64> {
        Ok(lyapunov(&self.oscillator, &self.weights, self.cfg.lambda)?.total)
    }
}

/// Everything one forward pass produces.
#[derive(Clone, Debug)]
pub struct ForwardResult {
    pub hidden: Vec<Vec<f64>>,
    pub attention: SparseMatrix,
    pub order_parameter: f64,
    pub graph: SparseGraph,
    pub loss: Option<f64>,
    /// Phases after the `t_sync` integration steps.
    pub phases: Vec<f64>,
    /// Embeddings the graph was built from.
    pub embeddings: Vec<PoincarePoint>,
}

fn check_inputs(model: &HoclModel, inputs: &[Vec<f64>], targets: Option<&[f64]>) -> Result<()> {
    if inputs.len() != model.cfg.n {
        return Err(Error::DimensionMismatch(format!(
            "{} inputs vs {} units",
            inputs.len(),
            model.cfg.n
        )));
    }
    for (i, x) in inputs.iter().enumerate() {
        if x.len() != model.cfg.d_in {
            return Err(Error::DimensionMismatch(format!(
                "input {i} has dimension {} vs d_in = {}",
                x.len(),
                model.cfg.d_in
            )));
        }
    }
    if let Some(y) = targets {
        if y.len() != model.cfg.n {
            return Err(Error::DimensionMismatch(format!(
                "{} targets vs {} units",
                y.len(),
                model.cfg.n
            )));
        }
    }
    Ok(())
}

fn readout_loss(output_weights: &[Vec<f64>], hidden: &[Vec<f64>], targets: &[f64]) -> f64 {
    let n = targets.len() as f64;
    output_weights
        .iter()
        .zip(hidden)
        .zip(targets)
        .map(|((u, h), &y)| {
            let pred: f64 = u.iter().zip(h).map(|(a, b)| a * b).sum();
            (pred - y) * (pred - y)
        })
        .sum::<f64>()
        / n
}

/// Pipeline from given embeddings; `graph` reuses a prebuilt topology when
/// supplied (the within-iteration convention), otherwise it is built from
/// the embeddings.
fn forward_from_embeddings(
    model: &HoclModel,
    embeddings: Vec<PoincarePoint>,
    graph: Option<SparseGraph>,
    inputs: &[Vec<f64>],
    targets: Option<&[f64]>,
) -> Result<ForwardResult> {
    let graph = match graph {
        Some(g) => g,
        None => build_graph(&embeddings, model.cfg.delta, model.cfg.k_cap)?,
    };
    let mut osc = model.oscillator.clone();
    for _ in 0..model.cfg.t_sync {
        osc = euler_phase_step(&osc, model.cfg.dt, CouplingVariant::SparseLocal, Some(&graph))?;
    }
    let attention = local_attention_matrix(&osc, &graph)?;

    let n = model.cfg.n;
    let d_in = model.cfg.d_in;
    let sigma_a = model.cfg.nonlinearity;
    let weights = &model.weights;
    let hidden = exec::map_units(n, |i| {
        let mut h = vec![0.0; d_in];
        for &(j, a) in attention.row(i) {
            let w_ij = weights.get(i, j);
            for (hc, xc) in h.iter_mut().zip(&inputs[j]) {
                *hc += a * w_ij * xc;
            }
        }
        for hc in &mut h {
            *hc = sigma_a.apply(*hc);
        }
        h
    });

    let (r, _) = order_parameter(osc.phases())?;
    let loss = targets.map(|y| readout_loss(&model.output_weights, &hidden, y));
    Ok(ForwardResult {
        hidden,
        attention,
        order_parameter: r,
        graph,
        loss,
        phases: osc.phases().to_vec(),
        embeddings,
    })
}

/// Forward pass from raw inputs: embed through the projection, then the
/// graph/sync/attention/message pipeline. Pure in the model; two calls with
/// identical state return identical results.
pub fn forward(
    model: &HoclModel,
    inputs: &[Vec<f64>],
    targets: Option<&[f64]>,
) -> Result<ForwardResult> {
    check_inputs(model, inputs, targets)?;
    let embeddings: Vec<PoincarePoint> =
        inputs.iter().map(|x| embed_input(x, &model.projection)).collect::<Result<_>>()?;
    forward_from_embeddings(model, embeddings, None, inputs, targets)
}

/// Per-iteration record; the training trace serializes these.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct TrainMetrics {
    pub iter: usize,
    pub loss: f64,
    pub r: f64,
    pub gate: f64,
    pub v_total: f64,
    pub frob_w: f64,
    pub density: f64,
    pub delta_v: f64,
}

/// One training iteration. `v_prev` is the previous iteration's Lyapunov
/// value (the initial state's value on the first call).
pub fn train_step(
    model: &mut HoclModel,
    task: &SyntheticTask,
    v_prev: f64,
    iter: usize,
) -> Result<TrainMetrics> {
    let fr = forward(model, &task.inputs, Some(&task.targets))?;
    let loss = fr.loss.expect("targets were supplied");
    if !loss.is_finite() {
        return Err(Error::NonFinite(format!("task loss at iteration {iter}: {loss}")));
    }
    let h_fd = model.cfg.h_fd;
    let (n, d, d_in) = (model.cfg.n, model.cfg.d, model.cfg.d_in);

    // fast parameter step: central differences through the pipeline with the
    // iteration's graph held fixed
    let (p_grads, u_grads) = {
        let model_ref: &HoclModel = model;
        let graph = &fr.graph;
        let p_grads = exec::map_tasks(d * d_in, |idx| -> Result<f64> {
            let (row, col) = (idx / d_in, idx % d_in);
            let mut probe = model_ref.clone();
            probe.projection[row][col] += h_fd;
            let z_plus: Vec<PoincarePoint> = task
                .inputs
                .iter()
                .map(|x| embed_input(x, &probe.projection))
                .collect::<Result<_>>()?;
            let lp = forward_from_embeddings(
                &probe,
                z_plus,
                Some(graph.clone()),
                &task.inputs,
                Some(&task.targets),
            )?
            .loss
            .expect("targets were supplied");
            probe.projection[row][col] -= 2.0 * h_fd;
            let z_minus: Vec<PoincarePoint> = task
                .inputs
                .iter()
                .map(|x| embed_input(x, &probe.projection))
                .collect::<Result<_>>()?;
            let lm = forward_from_embeddings(
                &probe,
                z_minus,
                Some(graph.clone()),
                &task.inputs,
                Some(&task.targets),
            )?
            .loss
            .expect("targets were supplied");
            Ok((lp - lm) / (2.0 * h_fd))
        });
        // the readout weights sit below the pipeline: probes reuse the
        // cached hidden vectors (bitwise equal to a full re-run)
        let hidden = &fr.hidden;
        let u_grads = exec::map_tasks(n * d_in, |idx| {
            let (row, col) = (idx / d_in, idx % d_in);
            let mut u = model_ref.output_weights.to_vec();
            u[row][col] += h_fd;
            let lp = readout_loss(&u, hidden, &task.targets);
            u[row][col] -= 2.0 * h_fd;
            let lm = readout_loss(&u, hidden, &task.targets);
            (lp - lm) / (2.0 * h_fd)
        });
        (p_grads, u_grads)
    };
    for (idx, g) in p_grads.into_iter().enumerate() {
        let g = g?;
        model.projection[idx / d_in][idx % d_in] -= model.cfg.alpha_f * g;
    }
    for (idx, g) in u_grads.into_iter().enumerate() {
        model.output_weights[idx / d_in][idx % d_in] -= model.cfg.alpha_f * g;
    }

    // the fast phase integration persists as state
    model.oscillator.set_phases(fr.phases.clone())?;
    model.embeddings = fr.embeddings.clone();

    // slow step, gated by this iteration's order parameter
    let r = fr.order_parameter;
    let gate_value = gate(r, &model.plasticity);
    let activations: Vec<f64> = fr
        .hidden
        .iter()
        .map(|h| h.iter().map(|c| c * c).sum::<f64>().sqrt().tanh())
        .collect();
    hebbian_step_in_place(
        &mut model.weights,
        &activations,
        r,
        &model.plasticity,
        EdgeScope::Graph(&fr.graph),
        &HebbianOptions {
            alpha_s: model.cfg.alpha_s,
            activation_bound: 1.0,
            decay_everywhere: false,
        },
    )?;

    // Riemannian embedding update over the same fixed topology
    if model.cfg.alpha_z > 0.0 {
        let z_grads = {
            let model_ref: &HoclModel = model;
            let graph = &fr.graph;
            let base = &model_ref.embeddings;
            exec::map_tasks(n * d, |idx| -> Result<f64> {
                let (i, c) = (idx / d, idx % d);
                let probe = |offset: f64| -> Result<f64> {
                    let mut z = base.to_vec();
                    let mut coords = z[i].coords().to_vec();
                    coords[c] += offset;
                    z[i] = crate::geometry::project_to_ball(&coords)?;
                    Ok(forward_from_embeddings(
                        model_ref,
                        z,
                        Some(graph.clone()),
                        &task.inputs,
                        Some(&task.targets),
                    )?
                    .loss
                    .expect("targets were supplied"))
                };
                Ok((probe(h_fd)? - probe(-h_fd)?) / (2.0 * h_fd))
            })
        };
        let mut grads = Vec::with_capacity(n * d);
        for g in z_grads {
            grads.push(g?);
        }
        for i in 0..n {
            let eg = &grads[i * d..(i + 1) * d];
            let rg = riemannian_grad(&model.embeddings[i], eg)?;
            model.embeddings[i] =
                exp_map(&model.embeddings[i], &rg.scaled(-model.cfg.alpha_z))?;
        }
    }

    let v_total = model.lyapunov_total()?;
    Ok(TrainMetrics {
        iter,
        loss,
        r,
        gate: gate_value,
        v_total,
        frob_w: model.weights.frobenius_norm(),
        density: density(&fr.graph),
        delta_v: (v_total - v_prev).abs(),
    })
}

/// Runs `train_step` until |ΔV| < `epsilon_conv` or `max_iters` iterations,
/// returning the per-iteration trace.
pub fn train(
    model: &mut HoclModel,
    task: &SyntheticTask,
    max_iters: usize,
    epsilon_conv: f64,
) -> Result<Vec<TrainMetrics>> {
    if max_iters < 1 {
        return Err(Error::InvalidArgument("max_iters must be >= 1".into()));
    }
    let mut v_prev = model.lyapunov_total()?;
    let mut rows = Vec::new();
    for iter in 0..max_iters {
        let metrics = train_step(model, task, v_prev, iter)?;
        v_prev = metrics.v_total;
        let delta_v = metrics.delta_v;
        rows.push(metrics);
        if delta_v < epsilon_conv {
            break;
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy() -> (HoclModel, SyntheticTask) {
        HoclModel::init(TrainConfig::toy_default()).unwrap()
    }

    #[test]
    fn forward_is_deterministic_bitwise() {
        let (model, task) = toy();
        let a = forward(&model, &task.inputs, Some(&task.targets)).unwrap();
        let b = forward(&model, &task.inputs, Some(&task.targets)).unwrap();
        assert_eq!(a.loss.unwrap().to_bits(), b.loss.unwrap().to_bits());
        assert_eq!(a.order_parameter.to_bits(), b.order_parameter.to_bits());
        for (ha, hb) in a.hidden.iter().zip(&b.hidden) {
            for (x, y) in ha.iter().zip(hb) {
                assert_eq!(x.to_bits(), y.to_bits());
            }
        }
        assert_eq!(a.phases, b.phases);
    }

    #[test]
    fn zero_structural_weights_zero_the_hidden_state() {
        let (mut model, task) = toy();
        model.weights = WeightMatrix::zeros(model.cfg.n);
        let fr = forward(&model, &task.inputs, None).unwrap();
        for h in &fr.hidden {
            assert!(h.iter().all(|&c| c == 0.0));
        }
    }

    #[test]
    fn self_only_graph_measures_only_the_diagonal() {
        // a tiny delta leaves N_i = {i}; with W_ii = 0 the message is empty
        let mut cfg = TrainConfig::toy_default();
        cfg.delta = 1e-9;
        let (model, task) = HoclModel::init(cfg).unwrap();
        let fr = forward(&model, &task.inputs, None).unwrap();
        for (i, h) in fr.hidden.iter().enumerate() {
            assert_eq!(fr.graph.neighborhood(i), &[i]);
            assert!(h.iter().all(|&c| c == 0.0));
        }
    }

    #[test]
    fn synchronized_identical_frequencies_saturate_attention() {
        let mut cfg = TrainConfig::toy_default();
        cfg.n = 3;
        cfg.sigma_omega = 0.0;
        cfg.t_sync = 400;
        cfg.dt = 0.05;
        cfg.delta = 50.0; // complete graph
        let (model, task) = HoclModel::init(cfg).unwrap();
        let fr = forward(&model, &task.inputs, None).unwrap();
        assert!(fr.order_parameter > 0.999, "r = {}", fr.order_parameter);
        for i in 0..3 {
            for &(j, a) in fr.attention.row(i) {
                assert!(
                    (a - model.cfg.coupling).abs() < 2e-3,
                    "A[{i}][{j}] = {a} should approach K"
                );
            }
        }
    }

    #[test]
    fn zero_learning_rates_freeze_the_learned_state() {
        let mut cfg = TrainConfig::toy_default();
        cfg.alpha_f = 0.0;
        cfg.alpha_s = 0.0;
        cfg.alpha_z = 0.0;
        let (mut model, task) = HoclModel::init(cfg).unwrap();
        let p0 = model.projection.clone();
        let u0 = model.output_weights.clone();
        let w0 = model.weights.clone();
        let z0 = model.embeddings.to_vec();
        let v0 = model.lyapunov_total().unwrap();
        let m = train_step(&mut model, &task, v0, 0).unwrap();
        assert_eq!(model.projection, p0);
        assert_eq!(model.output_weights, u0);
        assert_eq!(model.weights, w0);
        assert_eq!(model.embeddings, z0);
        assert!(m.loss.is_finite());
        // the fast phase dynamics are state, not a learned parameter: they
        // advance regardless of the learning rates
        assert!((0.0..=1.0).contains(&m.r));
    }

    #[test]
    fn pure_decay_shrinks_weights_when_gate_is_open() {
        let mut cfg = TrainConfig::toy_default();
        cfg.eta = 0.0;
        cfg.gamma = 0.05;
        cfg.sigma_omega = 0.0; // identical frequencies synchronize, opening the gate
        cfg.t_sync = 50;
        let (mut model, task) = HoclModel::init(cfg).unwrap();
        let before = model.weights.frobenius_norm();
        let v0 = model.lyapunov_total().unwrap();
        train_step(&mut model, &task, v0, 0).unwrap();
        assert!(
            model.weights.frobenius_norm() < before,
            "{} -> {}",
            before,
            model.weights.frobenius_norm()
        );
    }

    #[test]
    fn readout_gradient_is_richardson_consistent() {
        // the task loss is smooth in the readout weights; a randomly chosen
        // coordinate must give matching FD estimates at h and h/2
        let (model, task) = toy();
        let fr = forward(&model, &task.inputs, Some(&task.targets)).unwrap();
        let mut rng = DeterministicRng::new(99);
        for _ in 0..10 {
            let row = (rng.uniform() * model.cfg.n as f64) as usize;
            let col = (rng.uniform() * model.cfg.d_in as f64) as usize;
            let fd = |h: f64| {
                let mut u = model.output_weights.to_vec();
                u[row][col] += h;
                let lp = readout_loss(&u, &fr.hidden, &task.targets);
                u[row][col] -= 2.0 * h;
                let lm = readout_loss(&u, &fr.hidden, &task.targets);
                (lp - lm) / (2.0 * h)
            };
            let g1 = fd(1e-5);
            let g2 = fd(5e-6);
            if g1.abs() > 1e-12 {
                assert!(
                    ((g1 - g2) / g1).abs() < 1e-4,
                    "u[{row}][{col}]: {g1} vs {g2}"
                );
            }
        }
    }

    #[test]
    fn hebbian_gate_uses_the_same_iterations_order_parameter() {
        let (mut model, task) = toy();
        let v0 = model.lyapunov_total().unwrap();
        let m = train_step(&mut model, &task, v0, 0).unwrap();
        let expected = gate(m.r, model.plasticity());
        assert_eq!(m.gate.to_bits(), expected.to_bits());
    }

    #[test]
    fn embeddings_stay_inside_the_ball_through_training() {
        let mut cfg = TrainConfig::toy_default();
        cfg.max_iters = 25;
        let (mut model, task) = HoclModel::init(cfg).unwrap();
        let rows = train(&mut model, &task, 25, 1e-12).unwrap();
        assert!(!rows.is_empty());
        for z in model.embeddings() {
            assert!(z.norm() < 1.0);
        }
    }

    #[test]
    fn infinite_epsilon_stops_after_one_iteration() {
        let (mut model, task) = toy();
        let rows = train(&mut model, &task, 50, f64::INFINITY).unwrap();
        assert_eq!(rows.len(), 1);
    }

    #[test]
    fn zero_max_iters_is_rejected() {
        let (mut model, task) = toy();
        assert!(train(&mut model, &task, 0, 1e-6).is_err());
    }

    #[test]
    fn train_is_deterministic_across_runs() {
        let run = || {
            let (mut model, task) = toy();
            train(&mut model, &task, 5, 1e-15).unwrap()
        };
        let a = run();
        let b = run();
        assert_eq!(a.len(), b.len());
        for (ma, mb) in a.iter().zip(&b) {
            assert_eq!(ma.loss.to_bits(), mb.loss.to_bits());
            assert_eq!(ma.v_total.to_bits(), mb.v_total.to_bits());
            assert_eq!(ma.frob_w.to_bits(), mb.frob_w.to_bits());
        }
    }
}
