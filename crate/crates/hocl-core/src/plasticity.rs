//! Synchronization-gated Hebbian weight dynamics.
//!
//! The slow dynamics update each unordered pair (i, j), i ≠ j, by
//!
//!   W_ij ← W_ij + α_s · (−γ W_ij + η x_i x_j G(r))
//!
//! where the gate is either the hard indicator `1[r > r_c]` or its smooth
//! relaxation `G(r) = σ(β(r − r_c))`. With the gate closed and α_s = 1 the
//! rule reduces to pure exponential decay `W ← (1 − γ) W`.
//!
//! The weight matrix stays symmetric with a zero diagonal by construction;
//! updates are applied once per unordered pair and mirrored. Whenever the
//! activation bound M of the boundedness analysis holds, ‖W‖_F is ultimately
//! bounded by `η M² N / γ` and every step taken above that bound strictly
//! shrinks ‖W‖_F (for α_s γ < 1).

use crate::error::{Error, Result};
use crate::graph::SparseGraph;
use crate::rng::DeterministicRng;
use serde::{Deserialize, Serialize};

/// Symmetric N×N structural weights with zero diagonal, stored row-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightMatrix {
    n: usize,
    w: Vec<f64>,
}

impl WeightMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, w: vec![0.0; n * n] }
    }

    /// Random symmetric init: each unordered pair (i < j) gets one
    /// `N(0, σ²)` draw written to both triangles; the diagonal stays zero.
    /// Draw order is row-major over the upper triangle.
    pub fn random_symmetric(n: usize, sigma: f64, rng: &mut DeterministicRng) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in (i + 1)..n {
                let v = rng.normal() * sigma;
                m.w[i * n + j] = v;
                m.w[j * n + i] = v;
            }
        }
        m
    }

    /// Validates symmetry (within 1e−12), zero diagonal, and finiteness.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        let mut w = vec![0.0; n * n];
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has length {} in a {n}x{n} matrix",
                    row.len()
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(Error::NonFinite(format!("weight ({i},{j})")));
                }
                w[i * n + j] = v;
            }
        }
        for i in 0..n {
            if w[i * n + i] != 0.0 {
                return Err(Error::InvalidArgument(format!("nonzero diagonal at {i}")));
            }
            for j in (i + 1)..n {
                if (w[i * n + j] - w[j * n + i]).abs() > 1e-12 {
                    return Err(Error::InvalidArgument(format!(
                        "asymmetry at ({i},{j}): {} vs {}",
                        w[i * n + j],
                        w[j * n + i]
                    )));
                }
            }
        }
        Ok(Self { n, w })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.w[i * self.n + j]
    }

    /// Writes both (i, j) and (j, i). The diagonal is not writable.
    pub fn set_symmetric(&mut self, i: usize, j: usize, value: f64) {
        assert_ne!(i, j, "the diagonal of a weight matrix is fixed at zero");
        self.w[i * self.n + j] = value;
        self.w[j * self.n + i] = value;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.w[i * self.n..(i + 1) * self.n]
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.w.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Row-major copy of all entries.
    pub fn entries(&self) -> &[f64] {
        &self.w
    }

    /// Mean |W_ij| over unordered off-diagonal pairs.
    pub fn mean_abs_offdiag(&self) -> f64 {
        if self.n < 2 {
            return 0.0;
        }
        let mut sum = 0.0;
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                sum += self.get(i, j).abs();
            }
        }
        sum / (self.n * (self.n - 1) / 2) as f64
    }
}

/// Gate form: hard indicator (strict `r > r_c`) or sigmoid relaxation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GateMode {
    Hard,
    Smooth,
}

/// Parameters of the slow dynamics.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct PlasticityParams {
    pub eta: f64,
    pub gamma: f64,
    pub r_c: f64,
    pub beta: f64,
    pub gate_mode: GateMode,
}

impl PlasticityParams {
    /// Validates `η ≥ 0`, `γ > 0`, `r_c ∈ (0, 1)`, `β > 0`. (`η = 0` is the
    /// documented pure-decay degenerate case.)
    pub fn new(eta: f64, gamma: f64, r_c: f64, beta: f64, gate_mode: GateMode) -> Result<Self> {
        crate::error::ensure_non_negative("eta", eta)?;
        crate::error::ensure_positive("gamma", gamma)?;
        crate::error::ensure_unit_open("r_c", r_c)?;
        crate::error::ensure_positive("beta", beta)?;
        Ok(Self { eta, gamma, r_c, beta, gate_mode })
    }
}

/// Gate value in [0, 1]: `σ(β(r − r_c))` in smooth mode, `1[r > r_c]` in
/// hard mode.
pub fn gate(r: f64, params: &PlasticityParams) -> f64 {
    match params.gate_mode {
        GateMode::Smooth => 1.0 / (1.0 + (-params.beta * (r - params.r_c)).exp()),
        GateMode::Hard => {
            if r > params.r_c {
                1.0
            } else {
                0.0
            }
        }
    }
}

/// Which pairs a Hebbian step touches.
#[derive(Clone, Copy, Debug)]
pub enum EdgeScope<'a> {
    /// Every off-diagonal pair (the reference-simulation convention).
    AllPairs,
    /// Only pairs with at least one direction present in the graph. A
    /// capped graph can be directionally asymmetric; taking the union keeps
    /// the weight update symmetric.
    Graph(&'a SparseGraph),
}

/// Knobs of the discrete step.
#[derive(Clone, Copy, Debug)]
pub struct HebbianOptions {
    /// Discrete step multiplier α_s. The reference simulations use 1.0,
    /// which reproduces `W ← W − γW + η x x G(r)` exactly.
    pub alpha_s: f64,
    /// Declared activation bound M; exceeding it is a contract violation.
    pub activation_bound: f64,
    /// When a graph scope is given, also decay edges outside it. Off by
    /// default: the training loop never touches inactive edges.
    pub decay_everywhere: bool,
}

impl Default for HebbianOptions {
    fn default() -> Self {
        Self { alpha_s: 1.0, activation_bound: 1.0, decay_everywhere: false }
    }
}

/// One gated Hebbian step applied in place.
pub fn hebbian_step_in_place(
    w: &mut WeightMatrix,
    activations: &[f64],
    r: f64,
    params: &PlasticityParams,
    scope: EdgeScope<'_>,
    opts: &HebbianOptions,
) -> Result<()> {
    let n = w.n();
    if activations.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "{} activations vs {n} units",
            activations.len()
        )));
    }
    for (i, &x) in activations.iter().enumerate() {
        if !x.is_finite() {
            return Err(Error::NonFinite(format!("activation {i}")));
        }
        if x.abs() > opts.activation_bound {
            return Err(Error::ContractViolation(format!(
                "activation {i} has |x| = {} > declared bound M = {}",
                x.abs(),
                opts.activation_bound
            )));
        }
    }
    if let EdgeScope::Graph(g) = scope {
        if g.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "graph over {} units vs {n} weights",
                g.len()
            )));
        }
    }

    let g_val = gate(r, params);
    let alpha = opts.alpha_s;
    let update = |w: &mut WeightMatrix, i: usize, j: usize| {
        let old = w.get(i, j);
        let delta =
            alpha * (-params.gamma * old + params.eta * activations[i] * activations[j] * g_val);
        w.set_symmetric(i, j, old + delta);
    };
    match scope {
        EdgeScope::AllPairs => {
            for i in 0..n {
                for j in (i + 1)..n {
                    update(w, i, j);
                }
            }
        }
        EdgeScope::Graph(g) if opts.decay_everywhere => {
            // decay on inactive edges needs the full pair scan
            for i in 0..n {
                for j in (i + 1)..n {
                    if g.contains(i, j) || g.contains(j, i) {
                        update(w, i, j);
                    } else {
                        let old = w.get(i, j);
                        w.set_symmetric(i, j, old + alpha * (-params.gamma * old));
                    }
                }
            }
        }
        EdgeScope::Graph(g) => {
            // walk the O(n·k) directed entries; each unordered pair with at
            // least one direction present is updated exactly once
            for i in 0..n {
                for &j in g.neighborhood(i) {
                    if j > i {
                        update(w, i, j);
                    } else if j < i && !g.contains(j, i) {
                        update(w, j, i);
                    }
                }
            }
        }
    }
    Ok(())
}

/// Pure variant of [`hebbian_step_in_place`]: returns the updated matrix.
pub fn hebbian_step(
    w: &WeightMatrix,
    activations: &[f64],
    r: f64,
    params: &PlasticityParams,
    scope: EdgeScope<'_>,
    opts: &HebbianOptions,
) -> Result<WeightMatrix> {
    let mut out = w.clone();
    hebbian_step_in_place(&mut out, activations, r, params, scope, opts)?;
    Ok(out)
}

/// Ultimate bound on ‖W‖_F under bounded activations: `η M² N / γ`.
pub fn weight_bound(params: &PlasticityParams, m: f64, n: usize) -> f64 {
    params.eta * m * m * n as f64 / params.gamma
}
