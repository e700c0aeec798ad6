use crate::diffops::{curl, divergence, fd_gradient, fd_jacobian, strain_rate, substantial_derivative_in_frame, FdConfig};
use crate::error::Result;
use crate::fields::{pull_back_scalar, pull_back_velocity, FlowField, ScalarField, VectorFn};
use crate::frames::{omega_from_alpha, RigidFrameMotion};
use crate::tensor::{from_prime_components, tensor2_from_prime, to_prime_components, OrthMat3, Vec3};

use super::{CheckId, CheckResult, ResidualStats, SamplePoint};

/// `α(t)` and the observed coordinates `X'` of the inertial point `x`.
fn observe(frame: &RigidFrameMotion, s: &SamplePoint) -> Result<(OrthMat3, Vec3)> {
    let alpha = frame.alpha(s.t)?;
    let xp = to_prime_components(s.x - frame.y(s.t), &alpha);
    Ok((alpha, xp))
}

pub fn check_divergence_invariance(
    frame: &RigidFrameMotion,
    flow: &FlowField,
    samples: &[SamplePoint],
    fd: &FdConfig,
    tol: f64,
) -> Result<CheckResult> {
    let observed = pull_back_velocity(frame, flow);
    let mut stats = ResidualStats::default();
    for s in samples {
        let (_, xp) = observe(frame, s)?;
        let div_s = divergence(&flow.jacobian(s.x, s.t));
        let div_p = divergence(&fd_jacobian(&observed, xp, s.t, fd)?);
        stats.push(div_s - div_p);
    }
    Ok(stats.finish(CheckId::DivInvariance, tol))
}

pub fn check_scalar_gradient_invariance(
    frame: &RigidFrameMotion,
    field: &ScalarField,
    samples: &[SamplePoint],
    fd: &FdConfig,
    tol: f64,
) -> Result<CheckResult> {
    let observed = pull_back_scalar(frame, field);
    let mut stats = ResidualStats::default();
    for s in samples {
        let (alpha, xp) = observe(frame, s)?;
        let grad_s = to_prime_components(field.gradient(s.x, s.t), &alpha);
        let grad_p = fd_gradient(&observed, xp, s.t, fd)?;
        stats.push((grad_s - grad_p).max_abs());
    }
    Ok(stats.finish(CheckId::ScalarGradInvariance, tol))
}

/// Residual of `∂v_i/∂x_k = α_kl α_im ∂V'_m/∂X'_l + α_kj α̇_ij`.
///
/// The witness is `|curl C|` of the correction `C = α α̇ᵀ`, which equals
/// `2|ω|`.
pub fn check_velocity_gradient_relation(
    frame: &RigidFrameMotion,
    flow: &FlowField,
    samples: &[SamplePoint],
    fd: &FdConfig,
    tol: f64,
) -> Result<CheckResult> {
    let observed = pull_back_velocity(frame, flow);
    let mut stats = ResidualStats::default();
    for s in samples {
        let (alpha, xp) = observe(frame, s)?;
        let j_s = flow.jacobian(s.x, s.t);
        let j_p = fd_jacobian(&observed, xp, s.t, fd)?;
        let correction = *alpha.matrix() * frame.dalpha_dt(s.t).transpose();
        let rhs = tensor2_from_prime(&j_p, &alpha) + correction;
        stats.push((j_s - rhs).max_abs());
        stats.witness(curl(&correction).norm());
    }
    Ok(stats.finish(CheckId::VelgradRelation, tol))
}

pub fn check_strain_rate_invariance(
    frame: &RigidFrameMotion,
    flow: &FlowField,
    samples: &[SamplePoint],
    fd: &FdConfig,
    tol: f64,
) -> Result<CheckResult> {
    let observed = pull_back_velocity(frame, flow);
    let mut stats = ResidualStats::default();
    for s in samples {
        let (alpha, xp) = observe(frame, s)?;
        let e_s = strain_rate(&flow.jacobian(s.x, s.t));
        let e_p = strain_rate(&fd_jacobian(&observed, xp, s.t, fd)?);
        stats.push((e_s - tensor2_from_prime(&e_p, &alpha)).max_abs());
    }
    Ok(stats.finish(CheckId::StrainRateInvariance, tol))
}

/// Residual of `curl v = α curl' V' + 2ω`; the witness is `|2ω|`.
pub fn check_vorticity_relation(
    frame: &RigidFrameMotion,
    flow: &FlowField,
    samples: &[SamplePoint],
    fd: &FdConfig,
    tol: f64,
) -> Result<CheckResult> {
    let observed = pull_back_velocity(frame, flow);
    let mut stats = ResidualStats::default();
    for s in samples {
        let (alpha, xp) = observe(frame, s)?;
        let w_s = curl(&flow.jacobian(s.x, s.t));
        let w_p = curl(&fd_jacobian(&observed, xp, s.t, fd)?);
        let omega = omega_from_alpha(frame, s.t)?.omega;
        let rhs = from_prime_components(w_p, &alpha) + omega * 2.0;
        stats.push((w_s - rhs).max_abs());
        stats.witness((omega * 2.0).norm());
    }
    Ok(stats.finish(CheckId::VorticityRelation, tol))
}

/// The terms of the inertial acceleration of a fluid particle, all in
/// `s`-components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AccelerationTerms {
    /// `Dv/Dt` from the analytic field.
    pub material: Vec3,
    /// `ÿ`.
    pub origin: Vec3,
    /// `α V̇'`, the acceleration seen in `s'` expressed in `s`.
    pub relative: Vec3,
    /// `2ω × V`.
    pub coriolis: Vec3,
    /// `ω̇ × X`.
    pub euler: Vec3,
    /// `ω × (ω × X)`.
    pub centripetal: Vec3,
}

impl AccelerationTerms {
    pub fn reassembled(&self) -> Vec3 {
        self.origin + self.relative + self.coriolis + self.euler + self.centripetal
    }

    pub fn residual(&self) -> Vec3 {
        self.material - self.reassembled()
    }
}

pub fn acceleration_terms(
    frame: &RigidFrameMotion,
    flow: &FlowField,
    sample: &SamplePoint,
    fd: &FdConfig,
) -> Result<AccelerationTerms> {
    let t = sample.t;
    let (alpha, xp) = observe(frame, sample)?;
    let observed = pull_back_velocity(frame, flow);
    let v_p = observed.eval(xp, t)?;
    let dv_p = substantial_derivative_in_frame(&observed, v_p, xp, t, fd)?;
    let w = omega_from_alpha(frame, t)?;
    let x_rel = from_prime_components(xp, &alpha);
    let v_rel = from_prime_components(v_p, &alpha);
    Ok(AccelerationTerms {
        material: flow.material_acceleration(sample.x, t),
        origin: frame.d2y_dt2(t),
        relative: from_prime_components(dv_p, &alpha),
        coriolis: w.omega.cross(&v_rel) * 2.0,
        euler: w.domega_dt.cross(&x_rel),
        centripetal: w.omega.cross(&w.omega.cross(&x_rel)),
    })
}

pub fn check_acceleration_decomposition(
    frame: &RigidFrameMotion,
    flow: &FlowField,
    samples: &[SamplePoint],
    fd: &FdConfig,
    tol: f64,
) -> Result<CheckResult> {
    let mut stats = ResidualStats::default();
    for s in samples {
        let terms = acceleration_terms(frame, flow, s, fd)?;
        stats.push(terms.residual().max_abs());
    }
    Ok(stats.finish(CheckId::AccelerationDecomposition, tol))
}
