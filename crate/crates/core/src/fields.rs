//! Manufactured analytic fields in the inertial frame `s`, and their
//! pull-backs into a moving frame `s'`.
//!
//! Velocity gradients use the dyad ordering `∇v = e_k ∂_k v_i e_i`: a
//! [`Mat3`] `J` holds `J[k][i] = ∂v_i/∂x_k`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frames::{map_position_from_prime, observed_velocity, RigidFrameMotion};
use crate::tensor::{Mat3, Vec3};

/// Field ids accepted in scenario files.
pub const FIELD_IDS: [&str; 7] =
    ["uniform", "shear", "rigid_rotation", "taylor_green", "poly_linear", "gaussian_T", "linear_T"];

/// A vector-valued function of position and time.
pub trait VectorFn {
    fn eval(&self, p: Vec3, t: f64) -> Result<Vec3>;
}

/// A scalar-valued function of position and time.
pub trait ScalarFn {
    fn eval(&self, p: Vec3, t: f64) -> Result<f64>;
}

impl<F: Fn(Vec3, f64) -> Result<Vec3>> VectorFn for F {
    fn eval(&self, p: Vec3, t: f64) -> Result<Vec3> {
        self(p, t)
    }
}

impl<F: Fn(Vec3, f64) -> Result<f64>> ScalarFn for F {
    fn eval(&self, p: Vec3, t: f64) -> Result<f64> {
        self(p, t)
    }
}

/// Time modulation factor `m(t) = 1 + a sin(σ t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Modulation {
    pub a: f64,
    pub sigma: f64,
}

fn modulation_factor(m: Option<Modulation>, t: f64) -> (f64, f64) {
    match m {
        None => (1.0, 0.0),
        Some(Modulation { a, sigma }) => {
            let (s, c) = (sigma * t).sin_cos();
            (1.0 + a * s, a * sigma * c)
        }
    }
}

/// Velocity field families.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FlowKind {
    /// `v = U`.
    Uniform {
        #[serde(default = "defaults::uniform_velocity")]
        velocity: Vec3,
    },
    /// `v = (γ x₂, 0, 0)`.
    Shear {
        #[serde(default = "defaults::shear_gamma")]
        gamma: f64,
    },
    /// `v = Ω × x`.
    RigidRotation {
        #[serde(default = "defaults::rigid_omega")]
        omega: Vec3,
    },
    /// `v = (A cos kx₁ sin kx₂, −A sin kx₁ cos kx₂, 0)`.
    TaylorGreen {
        #[serde(default = "defaults::one")]
        amplitude: f64,
        #[serde(default = "defaults::one")]
        wavenumber: f64,
    },
    /// `v = c (x₁, x₂, x₃)`.
    PolyLinear {
        #[serde(default = "defaults::one")]
        scale: f64,
    },
}

/// Scalar field families (temperature, pressure).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum ScalarKind {
    /// `T = A exp(−|x − c|² / (2w²))`.
    #[serde(rename = "gaussian_T")]
    Gaussian {
        #[serde(default = "defaults::one")]
        amplitude: f64,
        #[serde(default)]
        center: Vec3,
        #[serde(default = "defaults::gaussian_width")]
        width: f64,
    },
    /// `T = T₀ + g · x`.
    #[serde(rename = "linear_T")]
    Linear {
        #[serde(default)]
        offset: f64,
        #[serde(default = "defaults::linear_gradient")]
        gradient: Vec3,
    },
}

mod defaults {
    use crate::tensor::Vec3;

    pub fn one() -> f64 {
        1.0
    }
    pub fn uniform_velocity() -> Vec3 {
        Vec3::new(1.0, 0.0, 0.0)
    }
    pub fn shear_gamma() -> f64 {
        3.0
    }
    pub fn rigid_omega() -> Vec3 {
        Vec3::new(0.0, 0.0, 2.0)
    }
    pub fn gaussian_width() -> f64 {
        0.5
    }
    pub fn linear_gradient() -> Vec3 {
        Vec3::new(1.0, 2.0, 3.0)
    }
}

/// A manufactured velocity field with analytic derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlowField {
    #[serde(flatten)]
    pub kind: FlowKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulation: Option<Modulation>,
}

impl FlowField {
    pub fn steady(kind: FlowKind) -> Self {
        FlowField { kind, modulation: None }
    }

    pub fn modulated(kind: FlowKind, modulation: Modulation) -> Self {
        FlowField { kind, modulation: Some(modulation) }
    }

    fn base_velocity(&self, x: Vec3) -> Vec3 {
        match self.kind {
            FlowKind::Uniform { velocity } => velocity,
            FlowKind::Shear { gamma } => Vec3::new(gamma * x[1], 0.0, 0.0),
            FlowKind::RigidRotation { omega } => omega.cross(&x),
            FlowKind::TaylorGreen { amplitude: a, wavenumber: k } => {
                let (s1, c1) = (k * x[0]).sin_cos();
                let (s2, c2) = (k * x[1]).sin_cos();
                Vec3::new(a * c1 * s2, -a * s1 * c2, 0.0)
            }
            FlowKind::PolyLinear { scale } => x * scale,
        }
    }

    fn base_jacobian(&self, x: Vec3) -> Mat3 {
        match self.kind {
            FlowKind::Uniform { .. } => Mat3::ZERO,
            FlowKind::Shear { gamma } => {
                let mut j = Mat3::ZERO;
                j[1][0] = gamma;
                j
            }
            // ∂_k (Ω × x)_i = ε_imk Ω_m, i.e. J = [Ω]×ᵀ.
            FlowKind::RigidRotation { omega } => omega.skew().transpose(),
            FlowKind::TaylorGreen { amplitude: a, wavenumber: k } => {
                let (s1, c1) = (k * x[0]).sin_cos();
                let (s2, c2) = (k * x[1]).sin_cos();
                let ak = a * k;
                Mat3([
                    [-ak * s1 * s2, -ak * c1 * c2, 0.0],
                    [ak * c1 * c2, ak * s1 * s2, 0.0],
                    [0.0, 0.0, 0.0],
                ])
            }
            FlowKind::PolyLinear { scale } => Mat3::IDENTITY * scale,
        }
    }

    /// `Δv` of the unmodulated field.
    fn base_laplacian(&self, x: Vec3) -> Vec3 {
        match self.kind {
            FlowKind::TaylorGreen { wavenumber: k, .. } => self.base_velocity(x) * (-2.0 * k * k),
            _ => Vec3::ZERO,
        }
    }

    pub fn velocity(&self, x: Vec3, t: f64) -> Vec3 {
        self.base_velocity(x) * modulation_factor(self.modulation, t).0
    }

    /// `J[k][i] = ∂v_i/∂x_k`.
    pub fn jacobian(&self, x: Vec3, t: f64) -> Mat3 {
        self.base_jacobian(x) * modulation_factor(self.modulation, t).0
    }

    /// Eulerian `∂v/∂t` at fixed `x`.
    pub fn dv_dt(&self, x: Vec3, t: f64) -> Vec3 {
        self.base_velocity(x) * modulation_factor(self.modulation, t).1
    }

    pub fn laplacian(&self, x: Vec3, t: f64) -> Vec3 {
        self.base_laplacian(x) * modulation_factor(self.modulation, t).0
    }

    /// `∇(∇·v)`; every catalog field has spatially uniform divergence.
    pub fn grad_div(&self, _x: Vec3, _t: f64) -> Vec3 {
        Vec3::ZERO
    }

    /// `∇·(∇v + (∇v)ᵀ) = Δv + ∇(∇·v)`.
    pub fn viscous_divergence(&self, x: Vec3, t: f64) -> Vec3 {
        self.laplacian(x, t) + self.grad_div(x, t)
    }

    /// Material acceleration `∂v/∂t + (v·∇)v`, analytic.
    pub fn material_acceleration(&self, x: Vec3, t: f64) -> Vec3 {
        let v = self.velocity(x, t);
        self.dv_dt(x, t) + self.jacobian(x, t).transpose() * v
    }
}

impl VectorFn for FlowField {
    fn eval(&self, p: Vec3, t: f64) -> Result<Vec3> {
        Ok(self.velocity(p, t))
    }
}

/// A manufactured scalar field with analytic derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalarField {
    #[serde(flatten)]
    pub kind: ScalarKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulation: Option<Modulation>,
}

impl ScalarField {
    pub fn steady(kind: ScalarKind) -> Self {
        ScalarField { kind, modulation: None }
    }

    fn base(&self, x: Vec3) -> (f64, Vec3) {
        match self.kind {
            ScalarKind::Gaussian { amplitude, center, width } => {
                let d = x - center;
                let v = amplitude * (-d.dot(&d) / (2.0 * width * width)).exp();
                (v, d * (-v / (width * width)))
            }
            ScalarKind::Linear { offset, gradient } => (offset + gradient.dot(&x), gradient),
        }
    }

    pub fn value(&self, x: Vec3, t: f64) -> f64 {
        self.base(x).0 * modulation_factor(self.modulation, t).0
    }

    pub fn gradient(&self, x: Vec3, t: f64) -> Vec3 {
        self.base(x).1 * modulation_factor(self.modulation, t).0
    }

    pub fn dt(&self, x: Vec3, t: f64) -> f64 {
        self.base(x).0 * modulation_factor(self.modulation, t).1
    }
}

impl ScalarFn for ScalarField {
    fn eval(&self, p: Vec3, t: f64) -> Result<f64> {
        Ok(self.value(p, t))
    }
}

/// Either kind of catalog field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Field {
    Flow(FlowField),
    Scalar(ScalarField),
}

impl Field {
    pub fn id(&self) -> &'static str {
        match self {
            Field::Flow(f) => match f.kind {
                FlowKind::Uniform { .. } => "uniform",
                FlowKind::Shear { .. } => "shear",
                FlowKind::RigidRotation { .. } => "rigid_rotation",
                FlowKind::TaylorGreen { .. } => "taylor_green",
                FlowKind::PolyLinear { .. } => "poly_linear",
            },
            Field::Scalar(s) => match s.kind {
                ScalarKind::Gaussian { .. } => "gaussian_T",
                ScalarKind::Linear { .. } => "linear_T",
            },
        }
    }

    pub fn as_flow(&self) -> Option<&FlowField> {
        match self {
            Field::Flow(f) => Some(f),
            Field::Scalar(_) => None,
        }
    }

    pub fn as_scalar(&self) -> Option<&ScalarField> {
        match self {
            Field::Scalar(s) => Some(s),
            Field::Flow(_) => None,
        }
    }

    /// Parameter keys accepted for a field id (besides `kind` and `modulation`).
    pub fn param_keys(id: &str) -> &'static [&'static str] {
        match id {
            "uniform" => &["velocity"],
            "shear" => &["gamma"],
            "rigid_rotation" => &["omega"],
            "taylor_green" => &["amplitude", "wavenumber"],
            "poly_linear" => &["scale"],
            "gaussian_T" => &["amplitude", "center", "width"],
            "linear_T" => &["offset", "gradient"],
            _ => &[],
        }
    }

    /// Catalog entry with default parameters.
    pub fn default_for(id: &str) -> Result<Field> {
        let flow = |kind| Ok(Field::Flow(FlowField::steady(kind)));
        let scalar = |kind| Ok(Field::Scalar(ScalarField::steady(kind)));
        match id {
            "uniform" => flow(FlowKind::Uniform { velocity: defaults::uniform_velocity() }),
            "shear" => flow(FlowKind::Shear { gamma: defaults::shear_gamma() }),
            "rigid_rotation" => flow(FlowKind::RigidRotation { omega: defaults::rigid_omega() }),
            "taylor_green" => flow(FlowKind::TaylorGreen { amplitude: 1.0, wavenumber: 1.0 }),
            "poly_linear" => flow(FlowKind::PolyLinear { scale: 1.0 }),
            "gaussian_T" => scalar(ScalarKind::Gaussian {
                amplitude: 1.0,
                center: Vec3::ZERO,
                width: defaults::gaussian_width(),
            }),
            "linear_T" => scalar(ScalarKind::Linear { offset: 0.0, gradient: defaults::linear_gradient() }),
            other => Err(Error::InvalidParameter(format!(
                "unknown field id `{other}`; valid ids: {}",
                FIELD_IDS.join(", ")
            ))),
        }
    }
}

/// Validates a catalog field's parameters.
pub fn make_field(field: Field) -> Result<Field> {
    let bad = |msg: &str| Err(Error::InvalidParameter(format!("{}: {msg}", field.id())));
    let finite_vec = |v: &Vec3| v.is_finite();
    let modulation = match &field {
        Field::Flow(f) => f.modulation,
        Field::Scalar(s) => s.modulation,
    };
    if let Some(m) = modulation {
        if !(m.a.is_finite() && m.sigma.is_finite()) {
            return bad("modulation parameters must be finite");
        }
        if m.a.abs() >= 1.0 {
            return bad("modulation amplitude must satisfy |a| < 1");
        }
    }
    match &field {
        Field::Flow(f) => match f.kind {
            FlowKind::Uniform { velocity } if !finite_vec(&velocity) => return bad("velocity must be finite"),
            FlowKind::Shear { gamma } if !gamma.is_finite() => return bad("gamma must be finite"),
            FlowKind::RigidRotation { omega } if !finite_vec(&omega) => return bad("omega must be finite"),
            FlowKind::TaylorGreen { amplitude, wavenumber } => {
                if !(amplitude.is_finite() && wavenumber.is_finite()) {
                    return bad("amplitude and wavenumber must be finite");
                }
                if !(wavenumber > 0.0 && wavenumber <= 20.0) {
                    return bad("wavenumber must lie in (0, 20]");
                }
            }
            FlowKind::PolyLinear { scale } if !scale.is_finite() => return bad("scale must be finite"),
            _ => {}
        },
        Field::Scalar(s) => match s.kind {
            ScalarKind::Gaussian { amplitude, center, width } => {
                if !(amplitude.is_finite() && finite_vec(&center)) {
                    return bad("amplitude and center must be finite");
                }
                if !(width >= 0.05 && width.is_finite()) {
                    return bad("width must be finite and >= 0.05");
                }
            }
            ScalarKind::Linear { offset, gradient } => {
                if !(offset.is_finite() && finite_vec(&gradient)) {
                    return bad("offset and gradient must be finite");
                }
            }
        },
    }
    Ok(field)
}

/// A scalar field observed in `s'`: `(X', t) ↦ T(α X' + y, t)`.
#[derive(Debug, Clone, Copy)]
pub struct ObservedScalar<'a, S: ScalarFn + ?Sized> {
    frame: &'a RigidFrameMotion,
    field: &'a S,
}

impl<S: ScalarFn + ?Sized> ScalarFn for ObservedScalar<'_, S> {
    fn eval(&self, x_prime: Vec3, t: f64) -> Result<f64> {
        let x = map_position_from_prime(self.frame, x_prime, t)?;
        self.field.eval(x, t)
    }
}

/// A velocity field observed in `s'`: `(X', t) ↦ V'(X', t)`.
#[derive(Debug, Clone, Copy)]
pub struct ObservedVelocity<'a, F: VectorFn + ?Sized> {
    frame: &'a RigidFrameMotion,
    flow: &'a F,
}

impl<F: VectorFn + ?Sized> VectorFn for ObservedVelocity<'_, F> {
    fn eval(&self, x_prime: Vec3, t: f64) -> Result<Vec3> {
        observed_velocity(self.frame, self.flow, x_prime, t)
    }
}

pub fn pull_back_scalar<'a, S: ScalarFn + ?Sized>(
    frame: &'a RigidFrameMotion,
    field: &'a S,
) -> ObservedScalar<'a, S> {
    ObservedScalar { frame, field }
}

pub fn pull_back_velocity<'a, F: VectorFn + ?Sized>(
    frame: &'a RigidFrameMotion,
    flow: &'a F,
) -> ObservedVelocity<'a, F> {
    ObservedVelocity { frame, flow }
}
