//! Composite Lyapunov function and the analytic bounds of the convergence
//! analysis.
//!
//! The energy splits into an oscillatory and a structural part:
//!
//!   V(W, θ) = −(K/2N) Σ_{i,j} cos(θ_i − θ_j)  +  (λ/2) ‖W‖_F²
//!
//! The double sum runs over all ordered pairs including i = j (the i = j
//! terms contribute the constant −K/2 and do not affect decrease). Since
//! `Σ_{i,j} cos(θ_i − θ_j) = (Σ cos θ)² + (Σ sin θ)² = N² r²`, the
//! oscillatory part is evaluated in O(N) as `−(K N / 2) r²`; the tests check
//! this identity against the literal double sum.

use crate::error::{Error, Result};
use crate::oscillator::OscillatorState;
use crate::plasticity::WeightMatrix;
use serde::{Deserialize, Serialize};

/// Value of the composite Lyapunov function and its two components.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct LyapunovValue {
    pub total: f64,
    pub oscillatory: f64,
    pub structural: f64,
    pub lambda: f64,
}

/// Evaluates V(W, θ) with regularization weight λ > 0.
pub fn lyapunov(state: &OscillatorState, w: &WeightMatrix, lambda: f64) -> Result<LyapunovValue> {
    crate::error::ensure_positive("lambda", lambda)?;
    if w.n() != state.len() {
        return Err(Error::DimensionMismatch(format!(
            "weights over {} units vs state of {}",
            w.n(),
            state.len()
        )));
    }
    let n = state.len() as f64;
    let (sum_cos, sum_sin) = state
        .phases()
        .iter()
        .fold((0.0, 0.0), |(c, s), &th| (c + th.cos(), s + th.sin()));
    let oscillatory = -(state.coupling() / (2.0 * n)) * (sum_cos * sum_cos + sum_sin * sum_sin);
    let frob = w.frobenius_norm();
    let structural = 0.5 * lambda * frob * frob;
    Ok(LyapunovValue { total: oscillatory + structural, oscillatory, structural, lambda })
}

/// Mean-field projection of V onto the normalized weight norm `w` and the
/// mean phase deviation `φ̄`: `−(K/2) cos²(φ̄) + (λ/2) w²`.
pub fn projected_lyapunov(w: f64, phi_bar: f64, k: f64, lambda: f64) -> f64 {
    let c = phi_bar.cos();
    -0.5 * k * c * c + 0.5 * lambda * w * w
}

/// Timescale-separation requirement: the quasi-static approximation holds
/// with error ≤ ε when `α_slow/α_fast ≤ ε / (L_C K N + η M²)`.
pub fn separation_bound(eps: f64, l_c: f64, k: f64, n: usize, eta: f64, m: f64) -> f64 {
    eps / (l_c * k * n as f64 + eta * m * m)
}

/// Lipschitz constant of the Gaussian compatibility kernel with respect to
/// either frequency argument: `1/(σ_C² √e)`.
pub fn kernel_lipschitz(sigma_c: f64) -> f64 {
    1.0 / (sigma_c * sigma_c * std::f64::consts::E.sqrt())
}

/// Two-timescale learning-rate schedule `(a/(t+1)^p, b/(t+1)^q)` with
/// `1/2 < p < q ≤ 1` and `a, b > 0`, so that α_fast/α_slow → ∞.
pub fn lr_schedule(t: u64, a: f64, b: f64, p: f64, q: f64) -> Result<(f64, f64)> {
    crate::error::ensure_positive("schedule scale a", a)?;
    crate::error::ensure_positive("schedule scale b", b)?;
    let exponents_ordered = 0.5 < p && p < q && q <= 1.0;
    if !exponents_ordered {
        return Err(Error::InvalidArgument(
            "schedule exponents must satisfy 1/2 < p < q <= 1".into(),
        ));
    }
    let base = (t + 1) as f64;
    Ok((a / base.powf(p), b / base.powf(q)))
}
