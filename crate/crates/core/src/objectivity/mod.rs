//! The verification suite: both sides of every frame-transformation identity
//! evaluated on sampled points, reduced to residual statistics.
//!
//! Every residual is computed in `s`-components unless stated otherwise.
//! Inertial-side quantities come from the analytic fields; observed-side
//! quantities come from finite differences of the pulled-back fields.

mod kinematics;
mod sampling;
mod stress;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::diffops::FdConfig;
use crate::error::Result;
use crate::fields::{Field, ScalarField};
use crate::frames::RigidFrameMotion;
use crate::tensor::Vec3;

pub use kinematics::{
    check_acceleration_decomposition, check_divergence_invariance, check_scalar_gradient_invariance,
    check_strain_rate_invariance, check_velocity_gradient_relation, check_vorticity_relation,
    AccelerationTerms, acceleration_terms,
};
pub use sampling::{draw_samples, SamplePoint, SamplingBox, TimeWindow};
pub use stress::{
    cauchy_traction, check_constitutive_frame_invariance, check_ns_rhs_equivalence,
    check_stress_tensor_transform, check_stress_transform_on_flow, fourier_heat_flux, newtonian_stress,
    stress_transform_residual, BodyForce, StressState,
};

/// Stable identifiers of the nine checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckId {
    DivInvariance,
    ScalarGradInvariance,
    VelgradRelation,
    StrainRateInvariance,
    VorticityRelation,
    StressTransform,
    ConstitutiveInvariance,
    AccelerationDecomposition,
    NsRhsEquivalence,
}

impl CheckId {
    pub const ALL: [CheckId; 9] = [
        CheckId::DivInvariance,
        CheckId::ScalarGradInvariance,
        CheckId::VelgradRelation,
        CheckId::StrainRateInvariance,
        CheckId::VorticityRelation,
        CheckId::StressTransform,
        CheckId::ConstitutiveInvariance,
        CheckId::AccelerationDecomposition,
        CheckId::NsRhsEquivalence,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CheckId::DivInvariance => "div_invariance",
            CheckId::ScalarGradInvariance => "scalar_grad_invariance",
            CheckId::VelgradRelation => "velgrad_relation",
            CheckId::StrainRateInvariance => "strain_rate_invariance",
            CheckId::VorticityRelation => "vorticity_relation",
            CheckId::StressTransform => "stress_transform",
            CheckId::ConstitutiveInvariance => "constitutive_invariance",
            CheckId::AccelerationDecomposition => "acceleration_decomposition",
            CheckId::NsRhsEquivalence => "ns_rhs_equivalence",
        }
    }

    /// Residual budget with order-4 stencils and `h = 1e-3`.
    pub fn default_tolerance(self) -> f64 {
        match self {
            CheckId::StressTransform => 1e-12,
            CheckId::AccelerationDecomposition => 1e-5,
            CheckId::NsRhsEquivalence => 1e-4,
            _ => 1e-6,
        }
    }

    /// Whether the check takes a velocity field (`true`) or a scalar field.
    pub fn needs_flow(self) -> bool {
        self != CheckId::ScalarGradInvariance
    }

    pub fn applies_to(self, field: &Field) -> bool {
        match field {
            Field::Flow(_) => self.needs_flow(),
            Field::Scalar(_) => !self.needs_flow(),
        }
    }
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CheckId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        CheckId::ALL.into_iter().find(|c| c.as_str() == s).ok_or_else(|| {
            let valid: Vec<_> = CheckId::ALL.iter().map(|c| c.as_str()).collect();
            format!("unknown check id `{s}`; valid check ids: {}", valid.join(", "))
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
}

/// Residual statistics of one check over a sample set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub check_id: CheckId,
    pub samples: usize,
    pub max_abs_err: f64,
    pub mean_abs_err: f64,
    pub tol: f64,
    pub verdict: Verdict,
    /// Largest magnitude of the frame-correction term, for the relations
    /// that demonstrate non-invariance.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<f64>,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

/// Running max/mean of absolute residuals, reduced in sample order.
#[derive(Debug, Clone, Default)]
pub struct ResidualStats {
    max: f64,
    sum: f64,
    count: usize,
    witness: Option<f64>,
}

impl ResidualStats {
    pub fn push(&mut self, residual: f64) {
        let r = if residual.is_nan() { f64::INFINITY } else { residual.abs() };
        self.max = self.max.max(r);
        self.sum += r;
        self.count += 1;
    }

    pub fn witness(&mut self, w: f64) {
        self.witness = Some(self.witness.unwrap_or(0.0).max(w));
    }

    pub fn finish(self, check_id: CheckId, tol: f64) -> CheckResult {
        let mean = if self.count == 0 { 0.0 } else { self.sum / self.count as f64 };
        let verdict = if self.max <= tol { Verdict::Pass } else { Verdict::Fail };
        CheckResult {
            check_id,
            samples: self.count,
            max_abs_err: self.max,
            mean_abs_err: mean,
            tol,
            verdict,
            witness: self.witness,
        }
    }
}

/// Material constants and the externally supplied pressure field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Physics {
    pub pressure: ScalarField,
    pub mu: f64,
    pub rho: f64,
    pub g: Vec3,
    /// Thermal conductivity for the Fourier law.
    pub k: f64,
}

impl Default for Physics {
    fn default() -> Self {
        Physics {
            pressure: *Field::default_for("gaussian_T").expect("catalog").as_scalar().expect("scalar"),
            mu: 1.0,
            rho: 1.0,
            g: Vec3::new(0.0, 0.0, -9.81),
            k: 1.0,
        }
    }
}

/// Runs one check on one (frame, field) pair. Returns `Ok(None)` when the
/// check does not apply to the field's kind.
pub fn run_check(
    check: CheckId,
    frame: &RigidFrameMotion,
    field: &Field,
    physics: &Physics,
    samples: &[SamplePoint],
    fd: &FdConfig,
    tol: f64,
) -> Result<Option<CheckResult>> {
    if !check.applies_to(field) {
        return Ok(None);
    }
    if let Field::Scalar(s) = field {
        return check_scalar_gradient_invariance(frame, s, samples, fd, tol).map(Some);
    }
    let flow = field.as_flow().expect("flow checked above");
    let body = BodyForce::new(physics.g, physics.rho)?;
    let r = match check {
        CheckId::DivInvariance => check_divergence_invariance(frame, flow, samples, fd, tol),
        CheckId::VelgradRelation => check_velocity_gradient_relation(frame, flow, samples, fd, tol),
        CheckId::StrainRateInvariance => check_strain_rate_invariance(frame, flow, samples, fd, tol),
        CheckId::VorticityRelation => check_vorticity_relation(frame, flow, samples, fd, tol),
        CheckId::StressTransform => {
            check_stress_transform_on_flow(frame, flow, &physics.pressure, physics.mu, samples, tol)
        }
        CheckId::ConstitutiveInvariance => check_constitutive_frame_invariance(
            frame,
            flow,
            &physics.pressure,
            physics.mu,
            samples,
            fd,
            tol,
        ),
        CheckId::AccelerationDecomposition => check_acceleration_decomposition(frame, flow, samples, fd, tol),
        CheckId::NsRhsEquivalence => {
            check_ns_rhs_equivalence(frame, flow, &physics.pressure, physics.mu, &body, samples, fd, tol)
        }
        CheckId::ScalarGradInvariance => unreachable!("scalar check handled above"),
    }?;
    Ok(Some(r))
}
