//! The moving frame `s'` relative to the inertial frame `s`.
//!
//! A frame is described by the `s`-components `y(t)` of the vector from `o` to
//! `o'` and by the transformation coefficients `α(t)`. Angular velocity is
//! extracted from `α` and `α̇` by a Levi-Civita contraction; positions and
//! velocities are mapped between the two frames.

mod builtin;

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::Result;
use crate::fields::VectorFn;
use crate::tensor::{epsilon, to_prime_components, Mat3, OrthMat3, Vec3, ORTH_TOLERANCE};

pub use builtin::{
    AcceleratedTranslation, ConstantRotation, FrameKind, FrameSpec, Identity, Poly3, Screw,
    UniformTranslation, Wobble, FRAME_IDS,
};

/// Identity-residual tolerance when every frame derivative is analytic.
pub const ANALYTIC_IDENTITY_TOL: f64 = 1e-8;
/// Identity-residual tolerance when a frame derivative comes from finite differences.
pub const FD_IDENTITY_TOL: f64 = 1e-5;

/// Closed-form description of a rigid frame motion.
///
/// Only `origin` and `rotation` are required. Any derivative left as `None`
/// is obtained by central differences in [`RigidFrameMotion`].
pub trait FrameMotion: Send + Sync + fmt::Debug {
    /// `y_i(t)`, the `s`-components of `oo'`.
    fn origin(&self, t: f64) -> Vec3;
    /// `α_ij(t) = e_i · e'_j`.
    fn rotation(&self, t: f64) -> Mat3;

    fn origin_velocity(&self, _t: f64) -> Option<Vec3> {
        None
    }
    fn origin_acceleration(&self, _t: f64) -> Option<Vec3> {
        None
    }
    fn rotation_rate(&self, _t: f64) -> Option<Mat3> {
        None
    }
    fn rotation_acceleration(&self, _t: f64) -> Option<Mat3> {
        None
    }
}

/// How frame time-derivatives are obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DerivativeMode {
    /// Use analytic derivatives where the motion provides them.
    Analytic,
    /// Ignore analytic derivatives and difference `y` and `α` numerically.
    FiniteDifference,
}

/// Angular velocity `ω` of `s'` relative to `s` and its rate `ω̇`, both in
/// `s`-components.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AngularVelocity {
    pub omega: Vec3,
    pub domega_dt: Vec3,
}

/// A moving frame `s'`: a [`FrameMotion`] plus the policy for its derivatives.
#[derive(Debug, Clone)]
pub struct RigidFrameMotion {
    name: String,
    motion: Arc<dyn FrameMotion>,
    mode: DerivativeMode,
    orth_tolerance: f64,
    fd_step: f64,
    fd_step2: f64,
}

impl RigidFrameMotion {
    pub fn new(name: impl Into<String>, motion: impl FrameMotion + 'static) -> Self {
        Self::from_arc(name, Arc::new(motion))
    }

    pub fn from_arc(name: impl Into<String>, motion: Arc<dyn FrameMotion>) -> Self {
        RigidFrameMotion {
            name: name.into(),
            motion,
            mode: DerivativeMode::Analytic,
            orth_tolerance: ORTH_TOLERANCE,
            fd_step: 1e-6,
            fd_step2: 1e-4,
        }
    }

    pub fn identity() -> Self {
        Self::new("identity", Identity)
    }

    pub fn with_mode(mut self, mode: DerivativeMode) -> Self {
        self.mode = mode;
        self
    }

    /// Base step for first time-derivatives; the step used at `t` is
    /// `h · max(1, |t|)`.
    pub fn with_fd_step(mut self, h: f64) -> Self {
        self.fd_step = h;
        self
    }

    /// Base step for second time-derivatives (`ÿ`, `ω̇`).
    pub fn with_fd_step2(mut self, h: f64) -> Self {
        self.fd_step2 = h;
        self
    }

    pub fn with_orth_tolerance(mut self, tol: f64) -> Self {
        self.orth_tolerance = tol;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn mode(&self) -> DerivativeMode {
        self.mode
    }

    pub fn motion(&self) -> &dyn FrameMotion {
        self.motion.as_ref()
    }

    fn analytic<T>(&self, v: Option<T>) -> Option<T> {
        match self.mode {
            DerivativeMode::Analytic => v,
            DerivativeMode::FiniteDifference => None,
        }
    }

    /// True when any derivative at `t` falls back to finite differences.
    pub fn uses_finite_differences(&self, t: f64) -> bool {
        let m = &self.motion;
        self.mode == DerivativeMode::FiniteDifference
            || m.origin_velocity(t).is_none()
            || m.origin_acceleration(t).is_none()
            || m.rotation_rate(t).is_none()
            || m.rotation_acceleration(t).is_none()
    }

    /// Tolerance for the kinematic identities at `t`, depending on whether
    /// derivatives are analytic.
    pub fn identity_tolerance(&self, t: f64) -> f64 {
        if self.uses_finite_differences(t) {
            FD_IDENTITY_TOL
        } else {
            ANALYTIC_IDENTITY_TOL
        }
    }

    fn step(&self, base: f64, t: f64) -> f64 {
        base * t.abs().max(1.0)
    }

    pub fn y(&self, t: f64) -> Vec3 {
        self.motion.origin(t)
    }

    pub fn dy_dt(&self, t: f64) -> Vec3 {
        self.analytic(self.motion.origin_velocity(t)).unwrap_or_else(|| {
            let h = self.step(self.fd_step, t);
            (self.motion.origin(t + h) - self.motion.origin(t - h)) * (0.5 / h)
        })
    }

    pub fn d2y_dt2(&self, t: f64) -> Vec3 {
        self.analytic(self.motion.origin_acceleration(t)).unwrap_or_else(|| {
            let h = self.step(self.fd_step2, t);
            let m = &self.motion;
            (m.origin(t + h) - m.origin(t) * 2.0 + m.origin(t - h)) * (1.0 / (h * h))
        })
    }

    /// Validated transformation coefficients at `t`.
    pub fn alpha(&self, t: f64) -> Result<OrthMat3> {
        OrthMat3::with_tolerance(self.motion.rotation(t), self.orth_tolerance)
    }

    pub fn dalpha_dt(&self, t: f64) -> Mat3 {
        self.analytic(self.motion.rotation_rate(t))
            .unwrap_or_else(|| self.dalpha_dt_fd(t, self.step(self.fd_step, t)))
    }

    /// Central-difference `α̇` with an explicit step.
    pub fn dalpha_dt_fd(&self, t: f64, h: f64) -> Mat3 {
        (self.motion.rotation(t + h) - self.motion.rotation(t - h)) * (0.5 / h)
    }

    fn d2alpha_dt2(&self, t: f64) -> Option<Mat3> {
        self.analytic(self.motion.rotation_acceleration(t))
    }
}

/// `ω_i = ½ ε_lik α_kj α̇_lj`, evaluated by direct index summation.
pub fn omega_from_rates(alpha: &Mat3, dalpha_dt: &Mat3) -> Vec3 {
    let mut omega = Vec3::ZERO;
    for i in 0..3 {
        let mut s = 0.0;
        for l in 0..3 {
            for k in 0..3 {
                let e = epsilon(l, i, k);
                if e == 0.0 {
                    continue;
                }
                for j in 0..3 {
                    s += e * alpha[k][j] * dalpha_dt[l][j];
                }
            }
        }
        omega[i] = 0.5 * s;
    }
    omega
}

/// Angular velocity of `frame` at `t`.
///
/// `ω̇` uses `α̈` when the motion supplies it (`Ẇ = α̈αᵀ + α̇α̇ᵀ` with
/// `W = α̇αᵀ`); otherwise it is a Richardson-extrapolated central difference
/// of `ω` with steps `h` and `h/2`.
pub fn omega_from_alpha(frame: &RigidFrameMotion, t: f64) -> Result<AngularVelocity> {
    let alpha = frame.alpha(t)?;
    let a = alpha.matrix();
    let adot = frame.dalpha_dt(t);
    let omega = omega_from_rates(a, &adot);

    let domega_dt = match frame.d2alpha_dt2(t) {
        Some(addot) => {
            let wdot = addot * a.transpose() + adot * adot.transpose();
            omega_from_rates(&Mat3::IDENTITY, &wdot)
        }
        None => {
            let h = frame.step(frame.fd_step2, t);
            let omega_at = |tt: f64| -> Result<Vec3> {
                let al = frame.alpha(tt)?;
                Ok(omega_from_rates(al.matrix(), &frame.dalpha_dt(tt)))
            };
            let d_h = (omega_at(t + h)? - omega_at(t - h)?) * (0.5 / h);
            let h2 = 0.5 * h;
            let d_h2 = (omega_at(t + h2)? - omega_at(t - h2)?) * (0.5 / h2);
            (d_h2 * 4.0 - d_h) * (1.0 / 3.0)
        }
    };
    Ok(AngularVelocity { omega, domega_dt })
}

/// `X'_j = (x_i − y_i(t)) α_ij(t)`.
pub fn map_position_to_prime(frame: &RigidFrameMotion, x_in_s: Vec3, t: f64) -> Result<Vec3> {
    let alpha = frame.alpha(t)?;
    Ok(to_prime_components(x_in_s - frame.y(t), &alpha))
}

/// `x_i = α_ij(t) X'_j + y_i(t)`.
pub fn map_position_from_prime(frame: &RigidFrameMotion, x_prime: Vec3, t: f64) -> Result<Vec3> {
    let alpha = frame.alpha(t)?;
    Ok(*alpha.matrix() * x_prime + frame.y(t))
}

/// `s'`-components of the velocity observed in `s'` for the fluid particle at
/// `X'`: `V = v − ẏ − α̇ X'`, then `V'_j = V_i α_ij`.
pub fn observed_velocity<F: VectorFn + ?Sized>(
    frame: &RigidFrameMotion,
    flow: &F,
    x_prime: Vec3,
    t: f64,
) -> Result<Vec3> {
    let alpha = frame.alpha(t)?;
    let x = *alpha.matrix() * x_prime + frame.y(t);
    let v = flow.eval(x, t)?;
    let v_rel = v - frame.dy_dt(t) - frame.dalpha_dt(t) * x_prime;
    Ok(to_prime_components(v_rel, &alpha))
}
