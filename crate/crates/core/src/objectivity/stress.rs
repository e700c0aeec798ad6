use log::warn;

use crate::diffops::{fd_gradient, fd_jacobian, fd_viscous_divergence, FdConfig};
use crate::error::{Error, Result};
use crate::fields::{pull_back_scalar, pull_back_velocity, FlowField, ScalarField, ScalarFn};
use crate::frames::RigidFrameMotion;
use crate::tensor::{from_prime_components, tensor2_from_prime, to_prime_components, Mat3, OrthMat3, Vec3};

use super::{CheckId, CheckResult, ResidualStats, SamplePoint};

/// Deviations of `|n|` from 1 below this are rounding and accepted as is.
const NORMAL_EXACT_LIMIT: f64 = 1e-12;
/// Largest deviation that is renormalised (with a warning) instead of rejected.
const NORMAL_REPAIR_LIMIT: f64 = 1e-6;

/// A Cauchy stress tensor `τ_ij`: the `i`-component of the force per unit
/// area on a face whose outward normal is `e_j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StressState {
    pub tau: Mat3,
}

impl StressState {
    pub fn new(tau: Mat3) -> Result<Self> {
        if !tau.is_finite() {
            return Err(Error::NonFinite("stress tensor"));
        }
        Ok(StressState { tau })
    }
}

/// Gravity-type body force per unit mass, scaled by density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BodyForce {
    pub g: Vec3,
    pub rho: f64,
}

impl BodyForce {
    pub fn new(g: Vec3, rho: f64) -> Result<Self> {
        if !(rho.is_finite() && rho > 0.0) {
            return Err(Error::InvalidParameter(format!("rho must be positive, got {rho}")));
        }
        if !g.is_finite() {
            return Err(Error::NonFinite("g"));
        }
        Ok(BodyForce { g, rho })
    }

    pub fn force(&self) -> Vec3 {
        self.g * self.rho
    }
}

/// Traction `t_i = τ_ij n_j` on the face with unit outward normal `n`.
///
/// A normal within `1e-6` of unit length is renormalised with a warning.
pub fn cauchy_traction(stress: &StressState, normal: Vec3) -> Result<Vec3> {
    let len = normal.norm();
    if !len.is_finite() {
        return Err(Error::NonFinite("normal"));
    }
    let deviation = (len - 1.0).abs();
    let n = if deviation <= NORMAL_EXACT_LIMIT {
        normal
    } else if deviation <= NORMAL_REPAIR_LIMIT {
        warn!("renormalising face normal with |n| = {len}");
        normal * (1.0 / len)
    } else {
        return Err(Error::NonUnitNormal(len));
    };
    Ok(stress.tau * n)
}

/// `max |τ'_phys − αᵀ τ α|`, where `τ'_phys[j1][j2]` is the traction on the
/// face with normal `e'_{j2}` projected onto `e'_{j1}`.
pub fn stress_transform_residual(stress: &StressState, alpha: &OrthMat3) -> Result<f64> {
    let a = alpha.matrix();
    let algebraic = a.transpose() * stress.tau * *a;
    let mut worst: f64 = 0.0;
    for j2 in 0..3 {
        let face = a.column(j2);
        let traction = cauchy_traction(stress, face)?;
        for j1 in 0..3 {
            let physical = a.column(j1).dot(&traction);
            worst = worst.max((physical - algebraic[j1][j2]).abs());
        }
    }
    Ok(worst)
}

/// Single-tensor form of the stress-transformation check.
pub fn check_stress_tensor_transform(stress: &StressState, alpha: &OrthMat3, tol: f64) -> Result<CheckResult> {
    let mut stats = ResidualStats::default();
    stats.push(stress_transform_residual(stress, alpha)?);
    Ok(stats.finish(CheckId::StressTransform, tol))
}

/// Stress-transformation check on the Newtonian stress of `flow` at every
/// sample, rotated by the frame's `α(t)`.
pub fn check_stress_transform_on_flow(
    frame: &RigidFrameMotion,
    flow: &FlowField,
    pressure: &ScalarField,
    mu: f64,
    samples: &[SamplePoint],
    tol: f64,
) -> Result<CheckResult> {
    let mut stats = ResidualStats::default();
    for s in samples {
        let stress = newtonian_stress(pressure.value(s.x, s.t), mu, &flow.jacobian(s.x, s.t))?;
        stats.push(stress_transform_residual(&stress, &frame.alpha(s.t)?)?);
    }
    Ok(stats.finish(CheckId::StressTransform, tol))
}

/// `τ = −p I + μ (J + Jᵀ)` for the velocity gradient `J`.
pub fn newtonian_stress(pressure: f64, mu: f64, velocity_gradient: &Mat3) -> Result<StressState> {
    if !(mu.is_finite() && mu >= 0.0) {
        return Err(Error::InvalidParameter(format!("mu must be non-negative, got {mu}")));
    }
    StressState::new(Mat3::IDENTITY * -pressure + (*velocity_gradient + velocity_gradient.transpose()) * mu)
}

/// `q = −k ∇T`.
pub fn fourier_heat_flux(k: f64, grad_t: Vec3) -> Result<Vec3> {
    if !(k.is_finite() && k >= 0.0) {
        return Err(Error::InvalidParameter(format!("k must be non-negative, got {k}")));
    }
    Ok(grad_t * -k)
}

/// Compares the Newtonian stress built in `s` with the one built in `s'` from
/// finite-difference gradients of the observed fields.
pub fn check_constitutive_frame_invariance(
    frame: &RigidFrameMotion,
    flow: &FlowField,
    pressure: &ScalarField,
    mu: f64,
    samples: &[SamplePoint],
    fd: &FdConfig,
    tol: f64,
) -> Result<CheckResult> {
    let observed_v = pull_back_velocity(frame, flow);
    let observed_p = pull_back_scalar(frame, pressure);
    let mut stats = ResidualStats::default();
    for s in samples {
        let alpha = frame.alpha(s.t)?;
        let xp = to_prime_components(s.x - frame.y(s.t), &alpha);
        let tau_s = newtonian_stress(pressure.value(s.x, s.t), mu, &flow.jacobian(s.x, s.t))?;
        let tau_p = newtonian_stress(observed_p.eval(xp, s.t)?, mu, &fd_jacobian(&observed_v, xp, s.t, fd)?)?;
        stats.push((tau_s.tau - tensor2_from_prime(&tau_p.tau, &alpha)).max_abs());
    }
    Ok(stats.finish(CheckId::ConstitutiveInvariance, tol))
}

/// Compares `−∇p + μ ∇·(∇v + ∇vᵀ) + ρ g` evaluated analytically in `s` with
/// the same expression built by nested stencils in `s'` and rotated back.
#[allow(clippy::too_many_arguments)]
pub fn check_ns_rhs_equivalence(
    frame: &RigidFrameMotion,
    flow: &FlowField,
    pressure: &ScalarField,
    mu: f64,
    body: &BodyForce,
    samples: &[SamplePoint],
    fd: &FdConfig,
    tol: f64,
) -> Result<CheckResult> {
    if !(mu.is_finite() && mu >= 0.0) {
        return Err(Error::InvalidParameter(format!("mu must be non-negative, got {mu}")));
    }
    let observed_v = pull_back_velocity(frame, flow);
    let observed_p = pull_back_scalar(frame, pressure);
    let mut stats = ResidualStats::default();
    for s in samples {
        let alpha = frame.alpha(s.t)?;
        let xp = to_prime_components(s.x - frame.y(s.t), &alpha);
        let rhs_s = -pressure.gradient(s.x, s.t) + flow.viscous_divergence(s.x, s.t) * mu + body.force();

        let grad_p = fd_gradient(&observed_p, xp, s.t, fd)?;
        let visc = fd_viscous_divergence(&observed_v, xp, s.t, fd)?;
        let rhs_p = -grad_p + visc * mu + to_prime_components(body.force(), &alpha);
        stats.push((rhs_s - from_prime_components(rhs_p, &alpha)).max_abs());
    }
    Ok(stats.finish(CheckId::NsRhsEquivalence, tol))
}
