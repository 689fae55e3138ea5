//! Kuramoto phase dynamics and synchronization-based attention.
//!
//! Three coupling variants are implemented side by side because the source
//! dynamics exist in two normalizations (see [`CouplingVariant`]):
//!
//!   mean-field classical:  dθ_i/dt = ω_i + (K/N) Σ_j sin(θ_j − θ_i)
//!   order-gated kernel:    dθ_i/dt = ω_i + K·r  Σ_j C(ω_i,ω_j) sin(θ_j − θ_i)
//!   sparse local:          dθ_i/dt = ω_i + K·r_{N_i} Σ_{j∈N_i} C(ω_i,ω_j) sin(θ_j − θ_i)
//!
//! with the Gaussian compatibility kernel
//! `C(ω_i, ω_j) = exp(−(ω_i−ω_j)²/(2σ_C²))`, the global order parameter
//! `r e^{iψ} = (1/N) Σ_j e^{iθ_j}`, and per-neighborhood local order
//! parameters. Self-coupling terms (`j = i`) contribute `sin 0 = 0` and are
//! left in the sums.
//!
//! Attention weights follow the rectified synchronization rule
//! `A_ij = max(0, K·r·C(ω_i,ω_j) − |ω_i − ω_j|)`.

use crate::error::{Error, Result};
use crate::exec;
use crate::graph::SparseGraph;
use serde::{Deserialize, Serialize};

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// Wraps an angle into [0, 2π).
pub fn wrap_phase(theta: f64) -> f64 {
    let w = theta.rem_euclid(TWO_PI);
    // rem_euclid of a tiny negative can round up to exactly 2π
    if w >= TWO_PI {
        w - TWO_PI
    } else {
        w
    }
}

/// Phases, intrinsic frequencies, and coupling constants for N units.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OscillatorState {
    phases: Vec<f64>,
    frequencies: Vec<f64>,
    coupling: f64,
    kernel_bandwidth: f64,
}

impl OscillatorState {
    /// Builds a state, wrapping phases into [0, 2π). Requires `N ≥ 1`,
    /// `K > 0`, `σ_C > 0`.
    pub fn new(
        phases: Vec<f64>,
        frequencies: Vec<f64>,
        coupling: f64,
        kernel_bandwidth: f64,
    ) -> Result<Self> {
        if phases.is_empty() {
            return Err(Error::InvalidArgument("oscillator count must be >= 1".into()));
        }
        if phases.len() != frequencies.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} phases vs {} frequencies",
                phases.len(),
                frequencies.len()
            )));
        }
        crate::error::ensure_positive("coupling K", coupling)?;
        crate::error::ensure_positive("kernel bandwidth sigma_c", kernel_bandwidth)?;
        Ok(Self {
            phases: phases.into_iter().map(wrap_phase).collect(),
            frequencies,
            coupling,
            kernel_bandwidth,
        })
    }

    pub fn len(&self) -> usize {
        self.phases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phases.is_empty()
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    pub fn frequencies(&self) -> &[f64] {
        &self.frequencies
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    pub fn kernel_bandwidth(&self) -> f64 {
        self.kernel_bandwidth
    }

    /// Subtracts the mean frequency so the ensemble is analyzed in the
    /// co-rotating frame; afterwards `mean(ω) = 0` to rounding.
    pub fn center_frequencies(&mut self) {
        let mean = self.frequencies.iter().sum::<f64>() / self.frequencies.len() as f64;
        for w in &mut self.frequencies {
            *w -= mean;
        }
    }

    /// Replaces the phases (wrapping applied). Length must match.
    pub fn set_phases(&mut self, phases: Vec<f64>) -> Result<()> {
        if phases.len() != self.phases.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} new phases vs {} oscillators",
                phases.len(),
                self.phases.len()
            )));
        }
        self.phases = phases.into_iter().map(wrap_phase).collect();
        Ok(())
    }
}

/// Which coupling sum drives the phase drift.
///
/// The two global forms differ deliberately: the order-gated kernel form
/// carries the `K·r` prefactor and the compatibility kernel, while the
/// mean-field classical form is the `K/N`, `C ≡ 1` discretization used by
/// the reference simulations. Scenarios pick whichever their protocol
/// prescribes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CouplingVariant {
    MeanFieldClassical,
    OrderGatedKernel,
    SparseLocal,
}

/// Gaussian compatibility kernel; 1 exactly when the frequencies coincide.
pub fn compatibility(omega_i: f64, omega_j: f64, sigma_c: f64) -> f64 {
    let d = omega_i - omega_j;
    (-d * d / (2.0 * sigma_c * sigma_c)).exp()
}

/// Global order parameter `(r, ψ)` with `r ∈ [0, 1]` and `ψ ∈ [0, 2π)`.
/// `ψ` is reported as 0 when `r < 1e−12` (the argument of a vanishing phasor
/// is meaningless).
pub fn order_parameter(phases: &[f64]) -> Result<(f64, f64)> {
    if phases.is_empty() {
        return Err(Error::InvalidArgument("order parameter of an empty ensemble".into()));
    }
    let n = phases.len() as f64;
    let (sum_cos, sum_sin) = phases
        .iter()
        .fold((0.0, 0.0), |(c, s), &th| (c + th.cos(), s + th.sin()));
    let re = sum_cos / n;
    let im = sum_sin / n;
    let r = (re * re + im * im).sqrt().clamp(0.0, 1.0);
    let psi = if r < 1e-12 { 0.0 } else { wrap_phase(im.atan2(re)) };
    Ok((r, psi))
}

/// Order parameter magnitude restricted to a neighborhood. An empty
/// neighborhood is degenerate: it logs a warning and returns 0.
pub fn local_order_parameter(phases: &[f64], neighborhood: &[usize]) -> f64 {
    if neighborhood.is_empty() {
        log::warn!("local order parameter over an empty neighborhood; returning 0");
        return 0.0;
    }
    let n = neighborhood.len() as f64;
    let (sum_cos, sum_sin) = neighborhood.iter().fold((0.0, 0.0), |(c, s), &j| {
        (c + phases[j].cos(), s + phases[j].sin())
    });
    let re = sum_cos / n;
    let im = sum_sin / n;
    (re * re + im * im).sqrt().clamp(0.0, 1.0)
}

/// dθ/dt for every unit under the selected variant. `graph` is required for
/// (and only consumed by) [`CouplingVariant::SparseLocal`].
pub fn phase_drift(
    state: &OscillatorState,
    variant: CouplingVariant,
    graph: Option<&SparseGraph>,
) -> Result<Vec<f64>> {
    let n = state.len();
    let phases = state.phases();
    let freqs = state.frequencies();
    let k = state.coupling();
    let sigma_c = state.kernel_bandwidth();

    match variant {
        CouplingVariant::MeanFieldClassical => {
            let k_over_n = k / n as f64;
            Ok(exec::map_units(n, |i| {
                let ti = phases[i];
                let coupling_sum: f64 = phases.iter().map(|&tj| (tj - ti).sin()).sum();
                freqs[i] + k_over_n * coupling_sum
            }))
        }
        CouplingVariant::OrderGatedKernel => {
            let (r, _) = order_parameter(phases)?;
            Ok(exec::map_units(n, |i| {
                let ti = phases[i];
                let wi = freqs[i];
                let coupling_sum: f64 = phases
                    .iter()
                    .zip(freqs)
                    .map(|(&tj, &wj)| compatibility(wi, wj, sigma_c) * (tj - ti).sin())
                    .sum();
                wi + k * r * coupling_sum
            }))
        }
        CouplingVariant::SparseLocal => {
            let graph = graph.ok_or_else(|| {
                Error::InvalidArgument("sparse-local coupling requires a graph".into())
            })?;
            if graph.len() != n {
                return Err(Error::DimensionMismatch(format!(
                    "graph over {} units vs state of {}",
                    graph.len(),
                    n
                )));
            }
            Ok(exec::map_units(n, |i| {
                let nbrs = graph.neighborhood(i);
                let r_local = local_order_parameter(phases, nbrs);
                let ti = phases[i];
                let wi = freqs[i];
                let coupling_sum: f64 = nbrs
                    .iter()
                    .map(|&j| compatibility(wi, freqs[j], sigma_c) * (phases[j] - ti).sin())
                    .sum();
                wi + k * r_local * coupling_sum
            }))
        }
    }
}

/// One forward-Euler step `θ_i ← wrap(θ_i + drift_i · dt)`; frequencies are
/// untouched. The new phases are written into a fresh buffer.
pub fn euler_phase_step(
    state: &OscillatorState,
    dt: f64,
    variant: CouplingVariant,
    graph: Option<&SparseGraph>,
) -> Result<OscillatorState> {
    crate::error::ensure_positive("dt", dt)?;
    let drift = phase_drift(state, variant, graph)?;
    let phases: Vec<f64> = state
        .phases
        .iter()
        .zip(&drift)
        .map(|(&th, &d)| wrap_phase(th + d * dt))
        .collect();
    Ok(OscillatorState {
        phases,
        frequencies: state.frequencies.clone(),
        coupling: state.coupling,
        kernel_bandwidth: state.kernel_bandwidth,
    })
}

/// Rectified synchronization attention weight
/// `max(0, K·r·C(ω_i,ω_j) − |ω_i − ω_j|)`.
pub fn ssa_attention(omega_i: f64, omega_j: f64, k: f64, r: f64, sigma_c: f64) -> f64 {
    (k * r * compatibility(omega_i, omega_j, sigma_c) - (omega_i - omega_j).abs()).max(0.0)
}

/// Row-sparse nonnegative matrix; row `i` only carries entries for the
/// neighborhood of unit `i`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SparseMatrix {
    n: usize,
    rows: Vec<Vec<(usize, f64)>>,
}

impl SparseMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &[(usize, f64)] {
        &self.rows[i]
    }

    /// Entry (i, j); zero outside the stored sparsity pattern.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.rows[i]
            .iter()
            .find(|(col, _)| *col == j)
            .map(|(_, v)| *v)
            .unwrap_or(0.0)
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[(usize, f64)]> {
        self.rows.iter().map(|r| r.as_slice())
    }
}

/// Local attention matrix over the graph: row `i` holds
/// `A_ij = max(0, K·r_{N_i}·C(ω_i,ω_j) − |ω_i−ω_j|)` for `j ∈ N_i`.
pub fn local_attention_matrix(state: &OscillatorState, graph: &SparseGraph) -> Result<SparseMatrix> {
    let n = state.len();
    if graph.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "graph over {} units vs state of {}",
            graph.len(),
            n
        )));
    }
    let phases = state.phases();
    let freqs = state.frequencies();
    let k = state.coupling();
    let sigma_c = state.kernel_bandwidth();
    let rows = exec::map_units(n, |i| {
        let nbrs = graph.neighborhood(i);
        let r_local = local_order_parameter(phases, nbrs);
        nbrs.iter()
            .map(|&j| (j, ssa_attention(freqs[i], freqs[j], k, r_local, sigma_c)))
            .collect::<Vec<_>>()
    });
    Ok(SparseMatrix { n, rows })
}
