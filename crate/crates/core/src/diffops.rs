//! Central-difference operators for observed fields, which have no analytic
//! derivatives, plus the per-frame substantial derivative.
//!
//! Gradients follow the crate-wide dyad ordering: `J[i][j] ≈ ∂V_j/∂X_i`.

use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::{ScalarFn, VectorFn};
use crate::tensor::{Mat3, Vec3};

/// Accuracy order of the central stencils.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum StencilOrder {
    Second,
    Fourth,
}

impl StencilOrder {
    pub fn as_u8(self) -> u8 {
        match self {
            StencilOrder::Second => 2,
            StencilOrder::Fourth => 4,
        }
    }
}

impl TryFrom<u8> for StencilOrder {
    type Error = String;
    fn try_from(v: u8) -> std::result::Result<Self, String> {
        match v {
            2 => Ok(StencilOrder::Second),
            4 => Ok(StencilOrder::Fourth),
            other => Err(format!("stencil order must be 2 or 4, got {other}")),
        }
    }
}

impl From<StencilOrder> for u8 {
    fn from(o: StencilOrder) -> u8 {
        o.as_u8()
    }
}

/// Step sizes and stencil order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FdConfig {
    /// Spatial step.
    pub h: f64,
    /// Time step.
    #[serde(rename = "ht")]
    pub h_t: f64,
    pub order: StencilOrder,
}

impl Default for FdConfig {
    fn default() -> Self {
        FdConfig { h: 1e-3, h_t: 1e-5, order: StencilOrder::Fourth }
    }
}

impl FdConfig {
    pub fn new(h: f64, h_t: f64, order: StencilOrder) -> Result<Self> {
        let cfg = FdConfig { h, h_t, order };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.h > 0.0 && self.h.is_finite()) {
            return Err(Error::InvalidParameter(format!("fd.h must be > 0, got {}", self.h)));
        }
        if !(self.h_t > 0.0 && self.h_t.is_finite()) {
            return Err(Error::InvalidParameter(format!("fd.ht must be > 0, got {}", self.h_t)));
        }
        Ok(())
    }
}

/// Central first derivative of `f` at 0 with step `h`.
pub fn central_derivative<T, F>(f: F, h: f64, order: StencilOrder) -> Result<T>
where
    T: Copy + Add<Output = T> + Sub<Output = T> + Mul<f64, Output = T>,
    F: Fn(f64) -> Result<T>,
{
    match order {
        StencilOrder::Second => Ok((f(h)? - f(-h)?) * (0.5 / h)),
        StencilOrder::Fourth => {
            let (m2, m1, p1, p2) = (f(-2.0 * h)?, f(-h)?, f(h)?, f(2.0 * h)?);
            Ok(((p1 - m1) * 8.0 + (m2 - p2)) * (1.0 / (12.0 * h)))
        }
    }
}

fn shifted(p: Vec3, axis: usize, s: f64) -> Vec3 {
    let mut q = p;
    q[axis] += s;
    q
}

/// `g_i ≈ ∂f/∂X_i`.
pub fn fd_gradient<S: ScalarFn + ?Sized>(field: &S, p: Vec3, t: f64, cfg: &FdConfig) -> Result<Vec3> {
    let mut g = Vec3::ZERO;
    for i in 0..3 {
        g[i] = central_derivative(|s| field.eval(shifted(p, i, s), t), cfg.h, cfg.order)?;
    }
    Ok(g)
}

/// `J[i][j] ≈ ∂V_j/∂X_i`.
pub fn fd_jacobian<F: VectorFn + ?Sized>(field: &F, p: Vec3, t: f64, cfg: &FdConfig) -> Result<Mat3> {
    let mut j = Mat3::ZERO;
    for i in 0..3 {
        let row: Vec3 = central_derivative(|s| field.eval(shifted(p, i, s), t), cfg.h, cfg.order)?;
        j[i] = row.0;
    }
    Ok(j)
}

/// `∂V/∂t` at fixed position.
pub fn fd_time_derivative<F: VectorFn + ?Sized>(field: &F, p: Vec3, t: f64, cfg: &FdConfig) -> Result<Vec3> {
    central_derivative(|s| field.eval(p, t + s), cfg.h_t, cfg.order)
}

/// `∇·(∇V + (∇V)ᵀ)` by nested stencils: each Jacobian is itself a stencil.
pub fn fd_viscous_divergence<F: VectorFn + ?Sized>(
    field: &F,
    p: Vec3,
    t: f64,
    cfg: &FdConfig,
) -> Result<Vec3> {
    let mut out = Vec3::ZERO;
    for k in 0..3 {
        let d_k: Mat3 = central_derivative(|s| fd_jacobian(field, shifted(p, k, s), t, cfg), cfg.h, cfg.order)?;
        for j in 0..3 {
            out[j] += d_k[k][j] + d_k[j][k];
        }
    }
    Ok(out)
}

/// `∂_i V_i = trace(J)`.
pub fn divergence(j: &Mat3) -> f64 {
    j.trace()
}

/// Curl under `J[i][j] = ∂_i V_j`: `(∂₂V₃ − ∂₃V₂, ∂₃V₁ − ∂₁V₃, ∂₁V₂ − ∂₂V₁)`.
pub fn curl(j: &Mat3) -> Vec3 {
    Vec3::new(j[1][2] - j[2][1], j[2][0] - j[0][2], j[0][1] - j[1][0])
}

/// `½(J + Jᵀ)`.
pub fn strain_rate(j: &Mat3) -> Mat3 {
    j.sym()
}

/// Substantial derivative of vector components `b` along a particle path,
/// taken entirely in one frame: `∂b/∂t + (u·∇)b`.
///
/// `b` and `velocity` must be components in the same frame; mixing frames is
/// not detectable here.
pub fn substantial_derivative_in_frame<F: VectorFn + ?Sized>(
    b: &F,
    velocity: Vec3,
    p: Vec3,
    t: f64,
    cfg: &FdConfig,
) -> Result<Vec3> {
    let dbdt = fd_time_derivative(b, p, t, cfg)?;
    let j = fd_jacobian(b, p, t, cfg)?;
    Ok(dbdt + j.transpose() * velocity)
}

/// `err(h) / err(h/2)`; about `2^order` for a converging stencil.
pub fn richardson_ratio(err_h: f64, err_half: f64) -> f64 {
    err_h / err_half
}
