//! Poincaré ball model of hyperbolic space (curvature −1).
//!
//! Points live strictly inside the unit ball with conformal factor
//! `λ_x = 2/(1−‖x‖²)`. Geodesic distance:
//!
//!   d(x, y) = arcosh(1 + 2‖x−y‖² / ((1−‖x‖²)(1−‖y‖²)))
//!
//! which from the origin reduces to `d(0, y) = 2 artanh(‖y‖)`. The
//! exponential map is the standard Möbius form; at the origin it reduces to
//! `exp_0(v) = tanh(‖v‖) v/‖v‖`. Riemannian gradients are Euclidean gradients
//! rescaled by `1/λ_x² = (1−‖x‖²)²/4`.
//!
//! Every operation returning a point clips to norm ≤ 1 − [`EPS_BALL`] so the
//! ball invariant survives floating-point rounding near the boundary.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Margin kept between any stored point and the unit sphere.
pub const EPS_BALL: f64 = 1e-5;

/// A point strictly inside the unit ball.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PoincarePoint {
    coords: Vec<f64>,
}

impl PoincarePoint {
    /// The origin of the ball in `dim` dimensions.
    pub fn origin(dim: usize) -> Self {
        Self { coords: vec![0.0; dim] }
    }

    /// Wraps coordinates that already satisfy the ball invariant
    /// (finite, norm ≤ 1 − ε). Use [`project_to_ball`] for arbitrary vectors.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite("PoincarePoint coordinates".into()));
        }
        let norm = l2_norm(&coords);
        if norm > 1.0 - EPS_BALL {
            return Err(Error::InvalidArgument(format!(
                "point norm {norm} exceeds ball margin {}",
                1.0 - EPS_BALL
            )));
        }
        Ok(Self { coords })
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn norm(&self) -> f64 {
        l2_norm(&self.coords)
    }

    fn norm_sq(&self) -> f64 {
        self.coords.iter().map(|c| c * c).sum()
    }
}

/// A tangent vector anchored at a base point.
#[derive(Clone, Debug, PartialEq)]
pub struct TangentVector {
    base: PoincarePoint,
    components: Vec<f64>,
}

impl TangentVector {
    pub fn new(base: PoincarePoint, components: Vec<f64>) -> Result<Self> {
        if components.len() != base.dim() {
            return Err(Error::DimensionMismatch(format!(
                "tangent dimension {} vs base dimension {}",
                components.len(),
                base.dim()
            )));
        }
        Ok(Self { base, components })
    }

    pub fn base(&self) -> &PoincarePoint {
        &self.base
    }

    pub fn components(&self) -> &[f64] {
        &self.components
    }

    /// The same vector scaled by `factor` (e.g. a negative learning rate).
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            base: self.base.clone(),
            components: self.components.iter().map(|c| c * factor).collect(),
        }
    }
}

fn l2_norm(v: &[f64]) -> f64 {
    v.iter().map(|c| c * c).sum::<f64>().sqrt()
}

/// Geodesic distance between two interior points.
///
/// Computed as `log1p(t + sqrt(t(t+2)))` with
/// `t = 2‖x−y‖²/((1−‖x‖²)(1−‖y‖²))`, the numerically stable form of
/// `arcosh(1 + t)` for arguments near 1.
pub fn hyperbolic_distance(x: &PoincarePoint, y: &PoincarePoint) -> Result<f64> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch(format!(
            "distance between dim {} and dim {}",
            x.dim(),
            y.dim()
        )));
    }
    let diff_sq: f64 = x
        .coords
        .iter()
        .zip(&y.coords)
        .map(|(a, b)| (a - b) * (a - b))
        .sum();
    let denom = (1.0 - x.norm_sq()) * (1.0 - y.norm_sq());
    let t = 2.0 * diff_sq / denom;
    Ok((t + (t * (t + 2.0)).sqrt()).ln_1p())
}

/// Möbius addition `u ⊕ v` at curvature −1. Internal to the exponential map.
fn mobius_add(u: &[f64], v: &[f64]) -> Vec<f64> {
    let uu: f64 = u.iter().map(|a| a * a).sum();
    let vv: f64 = v.iter().map(|a| a * a).sum();
    let uv: f64 = u.iter().zip(v).map(|(a, b)| a * b).sum();
    let cu = 1.0 + 2.0 * uv + vv;
    let cv = 1.0 - uu;
    let denom = 1.0 + 2.0 * uv + uu * vv;
    u.iter()
        .zip(v)
        .map(|(a, b)| (cu * a + cv * b) / denom)
        .collect()
}

/// Exponential map `exp_base(v)`: follows the geodesic leaving `base` with
/// initial velocity `v` for unit time. The result is clipped to the ball
/// margin, so it is valid for arbitrarily large tangents.
pub fn exp_map(base: &PoincarePoint, v: &TangentVector) -> Result<PoincarePoint> {
    if v.base() != base {
        return Err(Error::InvalidArgument(
            "tangent vector is anchored at a different base point".into(),
        ));
    }
    let vn = l2_norm(&v.components);
    if vn == 0.0 {
        return Ok(base.clone());
    }
    let lambda = 2.0 / (1.0 - base.norm_sq());
    let scale = (lambda * vn / 2.0).tanh() / vn;
    let step: Vec<f64> = v.components.iter().map(|c| c * scale).collect();
    project_to_ball(&mobius_add(&base.coords, &step))
}

/// Converts a Euclidean gradient at `base` into the Riemannian gradient by
/// the conformal rescaling `1/λ_base² = (1−‖base‖²)²/4`.
pub fn riemannian_grad(base: &PoincarePoint, euclidean_grad: &[f64]) -> Result<TangentVector> {
    if euclidean_grad.len() != base.dim() {
        return Err(Error::DimensionMismatch(format!(
            "gradient dimension {} vs base dimension {}",
            euclidean_grad.len(),
            base.dim()
        )));
    }
    let one_minus = 1.0 - base.norm_sq();
    let scale = one_minus * one_minus / 4.0;
    TangentVector::new(base.clone(), euclidean_grad.iter().map(|g| g * scale).collect())
}

/// Clips an arbitrary finite vector into the ball: vectors with norm beyond
/// the margin are rescaled to norm 1 − ε, interior vectors pass unchanged.
pub fn project_to_ball(coords: &[f64]) -> Result<PoincarePoint> {
    if coords.iter().any(|c| !c.is_finite()) {
        return Err(Error::NonFinite("project_to_ball input".into()));
    }
    let norm = l2_norm(coords);
    let max_norm = 1.0 - EPS_BALL;
    if norm <= max_norm {
        return Ok(PoincarePoint { coords: coords.to_vec() });
    }
    let scale = max_norm / norm;
    Ok(PoincarePoint { coords: coords.iter().map(|c| c * scale).collect() })
}

/// Embeds raw features into the ball: `exp_0(P·features)` for a row-major
/// projection matrix `P` (one row per output dimension).
pub fn embed_input(features: &[f64], projection_rows: &[Vec<f64>]) -> Result<PoincarePoint> {
    let projected: Vec<f64> = projection_rows
        .iter()
        .map(|row| {
            if row.len() != features.len() {
                return Err(Error::DimensionMismatch(format!(
                    "projection row length {} vs feature length {}",
                    row.len(),
                    features.len()
                )));
            }
            Ok(row.iter().zip(features).map(|(p, f)| p * f).sum())
        })
        .collect::<Result<_>>()?;
    let norm = l2_norm(&projected);
    if norm == 0.0 {
        return Ok(PoincarePoint::origin(projected.len()));
    }
    // exp at the origin: tanh(‖u‖) u/‖u‖
    let scale = norm.tanh() / norm;
    project_to_ball(&projected.iter().map(|c| c * scale).collect::<Vec<_>>())
}
