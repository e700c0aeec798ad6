//! Closed-form frame families with hand-coded derivatives.

use serde::{Deserialize, Serialize};

use super::{DerivativeMode, FrameMotion, RigidFrameMotion};
use crate::error::{Error, Result};
use crate::tensor::{Mat3, Vec3};

/// Frame ids accepted in scenario files.
pub const FRAME_IDS: [&str; 6] = [
    "identity",
    "uniform_translation",
    "accelerated_translation",
    "constant_rotation",
    "wobble",
    "screw",
];

/// Cubic (or lower) polynomial `c0 + c1 t + c2 t² + c3 t³`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Poly3(pub [f64; 4]);

impl Poly3 {
    pub fn eval(&self, t: f64) -> f64 {
        let c = &self.0;
        ((c[3] * t + c[2]) * t + c[1]) * t + c[0]
    }

    pub fn d1(&self, t: f64) -> f64 {
        let c = &self.0;
        (3.0 * c[3] * t + 2.0 * c[2]) * t + c[1]
    }

    pub fn d2(&self, t: f64) -> f64 {
        6.0 * self.0[3] * t + 2.0 * self.0[2]
    }
}

impl TryFrom<Vec<f64>> for Poly3 {
    type Error = String;

    fn try_from(v: Vec<f64>) -> std::result::Result<Self, String> {
        if v.len() > 4 {
            return Err(format!("polynomial degree must be <= 3, got {} coefficients", v.len()));
        }
        if v.iter().any(|c| !c.is_finite()) {
            return Err("polynomial coefficients must be finite".into());
        }
        let mut c = [0.0; 4];
        c[..v.len()].copy_from_slice(&v);
        Ok(Poly3(c))
    }
}

impl From<Poly3> for Vec<f64> {
    fn from(p: Poly3) -> Vec<f64> {
        p.0.to_vec()
    }
}

fn unit_axis(axis: Vec3) -> Result<Vec3> {
    let n = axis.norm();
    if !(n.is_finite() && n > 1e-12) {
        return Err(Error::InvalidParameter(format!("rotation axis must be nonzero, got {:?}", axis.0)));
    }
    Ok(axis * (1.0 / n))
}

#[derive(Debug, Clone, Copy)]
pub struct Identity;

impl FrameMotion for Identity {
    fn origin(&self, _t: f64) -> Vec3 {
        Vec3::ZERO
    }
    fn rotation(&self, _t: f64) -> Mat3 {
        Mat3::IDENTITY
    }
    fn origin_velocity(&self, _t: f64) -> Option<Vec3> {
        Some(Vec3::ZERO)
    }
    fn origin_acceleration(&self, _t: f64) -> Option<Vec3> {
        Some(Vec3::ZERO)
    }
    fn rotation_rate(&self, _t: f64) -> Option<Mat3> {
        Some(Mat3::ZERO)
    }
    fn rotation_acceleration(&self, _t: f64) -> Option<Mat3> {
        Some(Mat3::ZERO)
    }
}

/// `y = y0 + u t`, no rotation.
#[derive(Debug, Clone, Copy)]
pub struct UniformTranslation {
    pub origin: Vec3,
    pub velocity: Vec3,
}

impl UniformTranslation {
    pub fn new(origin: Vec3, velocity: Vec3) -> Self {
        UniformTranslation { origin, velocity }
    }
}

impl FrameMotion for UniformTranslation {
    fn origin(&self, t: f64) -> Vec3 {
        self.origin + self.velocity * t
    }
    fn rotation(&self, _t: f64) -> Mat3 {
        Mat3::IDENTITY
    }
    fn origin_velocity(&self, _t: f64) -> Option<Vec3> {
        Some(self.velocity)
    }
    fn origin_acceleration(&self, _t: f64) -> Option<Vec3> {
        Some(Vec3::ZERO)
    }
    fn rotation_rate(&self, _t: f64) -> Option<Mat3> {
        Some(Mat3::ZERO)
    }
    fn rotation_acceleration(&self, _t: f64) -> Option<Mat3> {
        Some(Mat3::ZERO)
    }
}

/// Each origin component is a cubic in `t`; no rotation.
#[derive(Debug, Clone, Copy)]
pub struct AcceleratedTranslation {
    pub coeffs: [Poly3; 3],
}

impl FrameMotion for AcceleratedTranslation {
    fn origin(&self, t: f64) -> Vec3 {
        Vec3::from_fn(|i| self.coeffs[i].eval(t))
    }
    fn rotation(&self, _t: f64) -> Mat3 {
        Mat3::IDENTITY
    }
    fn origin_velocity(&self, t: f64) -> Option<Vec3> {
        Some(Vec3::from_fn(|i| self.coeffs[i].d1(t)))
    }
    fn origin_acceleration(&self, t: f64) -> Option<Vec3> {
        Some(Vec3::from_fn(|i| self.coeffs[i].d2(t)))
    }
    fn rotation_rate(&self, _t: f64) -> Option<Mat3> {
        Some(Mat3::ZERO)
    }
    fn rotation_acceleration(&self, _t: f64) -> Option<Mat3> {
        Some(Mat3::ZERO)
    }
}

/// Rotation about a fixed unit axis through `o` at a constant rate.
#[derive(Debug, Clone, Copy)]
pub struct ConstantRotation {
    axis: Vec3,
    rate: f64,
}

impl ConstantRotation {
    pub fn new(axis: Vec3, rate: f64) -> Result<Self> {
        Ok(ConstantRotation { axis: unit_axis(axis)?, rate })
    }
}

impl FrameMotion for ConstantRotation {
    fn origin(&self, _t: f64) -> Vec3 {
        Vec3::ZERO
    }
    fn rotation(&self, t: f64) -> Mat3 {
        Mat3::rotation_axis_angle(self.axis, self.rate * t)
    }
    fn origin_velocity(&self, _t: f64) -> Option<Vec3> {
        Some(Vec3::ZERO)
    }
    fn origin_acceleration(&self, _t: f64) -> Option<Vec3> {
        Some(Vec3::ZERO)
    }
    fn rotation_rate(&self, t: f64) -> Option<Mat3> {
        Some(self.axis.skew() * self.rotation(t) * self.rate)
    }
    fn rotation_acceleration(&self, t: f64) -> Option<Mat3> {
        let k = self.axis.skew();
        Some(k * k * self.rotation(t) * (self.rate * self.rate))
    }
}

/// `α = Rz(φ) Ry(θ) Rx(ψ)` with each angle a cubic in `t`; origin fixed at `o`.
#[derive(Debug, Clone, Copy)]
pub struct Wobble {
    /// `[φ, θ, ψ]`: angles about the third, second and first axes.
    pub angles: [Poly3; 3],
}

const WOBBLE_AXES: [usize; 3] = [2, 1, 0];

impl Wobble {
    /// Value, first and second time derivatives of each elementary factor.
    fn factors(&self, t: f64) -> [[Mat3; 3]; 3] {
        let mut out = [[Mat3::ZERO; 3]; 3];
        for (n, poly) in self.angles.iter().enumerate() {
            let k = Vec3::unit(WOBBLE_AXES[n] + 1).expect("axis index").skew();
            let r = Mat3::rotation_axis_angle(Vec3::unit(WOBBLE_AXES[n] + 1).expect("axis index"), poly.eval(t));
            let (d1, d2) = (poly.d1(t), poly.d2(t));
            out[n] = [r, k * r * d1, (k * d2 + k * k * (d1 * d1)) * r];
        }
        out
    }
}

impl FrameMotion for Wobble {
    fn origin(&self, _t: f64) -> Vec3 {
        Vec3::ZERO
    }
    fn rotation(&self, t: f64) -> Mat3 {
        let [a, b, c] = self.factors(t);
        a[0] * b[0] * c[0]
    }
    fn origin_velocity(&self, _t: f64) -> Option<Vec3> {
        Some(Vec3::ZERO)
    }
    fn origin_acceleration(&self, _t: f64) -> Option<Vec3> {
        Some(Vec3::ZERO)
    }
    fn rotation_rate(&self, t: f64) -> Option<Mat3> {
        let [a, b, c] = self.factors(t);
        Some(a[1] * b[0] * c[0] + a[0] * b[1] * c[0] + a[0] * b[0] * c[1])
    }
    fn rotation_acceleration(&self, t: f64) -> Option<Mat3> {
        let [a, b, c] = self.factors(t);
        let pure = a[2] * b[0] * c[0] + a[0] * b[2] * c[0] + a[0] * b[0] * c[2];
        let mixed = a[1] * b[1] * c[0] + a[1] * b[0] * c[1] + a[0] * b[1] * c[1];
        Some(pure + mixed * 2.0)
    }
}

/// Constant rotation about a unit axis combined with steady advance along it.
#[derive(Debug, Clone, Copy)]
pub struct Screw {
    rotation: ConstantRotation,
    advance: f64,
    origin: Vec3,
}

impl Screw {
    pub fn new(axis: Vec3, rate: f64, advance: f64, origin: Vec3) -> Result<Self> {
        Ok(Screw { rotation: ConstantRotation::new(axis, rate)?, advance, origin })
    }
}

impl FrameMotion for Screw {
    fn origin(&self, t: f64) -> Vec3 {
        self.origin + self.rotation.axis * (self.advance * t)
    }
    fn rotation(&self, t: f64) -> Mat3 {
        self.rotation.rotation(t)
    }
    fn origin_velocity(&self, _t: f64) -> Option<Vec3> {
        Some(self.rotation.axis * self.advance)
    }
    fn origin_acceleration(&self, _t: f64) -> Option<Vec3> {
        Some(Vec3::ZERO)
    }
    fn rotation_rate(&self, t: f64) -> Option<Mat3> {
        self.rotation.rotation_rate(t)
    }
    fn rotation_acceleration(&self, t: f64) -> Option<Mat3> {
        self.rotation.rotation_acceleration(t)
    }
}

/// Parameters of a built-in frame family, as named in scenario files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FrameKind {
    Identity,
    UniformTranslation {
        #[serde(default = "defaults::translation_velocity")]
        velocity: Vec3,
        #[serde(default = "defaults::translation_origin")]
        origin: Vec3,
    },
    AcceleratedTranslation {
        #[serde(default = "defaults::accel_coeffs")]
        coeffs: [Poly3; 3],
    },
    ConstantRotation {
        #[serde(default = "defaults::z_axis")]
        axis: Vec3,
        #[serde(default = "defaults::rotation_rate")]
        rate: f64,
    },
    Wobble {
        #[serde(default = "defaults::wobble_angles")]
        angles: [Poly3; 3],
    },
    Screw {
        #[serde(default = "defaults::screw_axis")]
        axis: Vec3,
        #[serde(default = "defaults::screw_rate")]
        rate: f64,
        #[serde(default = "defaults::screw_advance")]
        advance: f64,
        #[serde(default)]
        origin: Vec3,
    },
}

mod defaults {
    use super::Poly3;
    use crate::tensor::Vec3;

    pub fn translation_velocity() -> Vec3 {
        Vec3::new(0.8, -0.5, 0.3)
    }
    pub fn translation_origin() -> Vec3 {
        Vec3::new(0.1, 0.2, -0.1)
    }
    pub fn accel_coeffs() -> [Poly3; 3] {
        [
            Poly3([0.1, 0.5, 0.8, -0.3]),
            Poly3([0.0, -0.4, 0.6, 0.2]),
            Poly3([-0.2, 0.3, -0.5, 0.4]),
        ]
    }
    pub fn z_axis() -> Vec3 {
        Vec3::new(0.0, 0.0, 1.0)
    }
    pub fn rotation_rate() -> f64 {
        2.0
    }
    pub fn wobble_angles() -> [Poly3; 3] {
        [
            Poly3([0.3, 0.9, 0.2, -0.1]),
            Poly3([0.1, 0.6, 0.0, -0.15]),
            Poly3([-0.2, 0.4, 0.3, 0.0]),
        ]
    }
    pub fn screw_axis() -> Vec3 {
        Vec3::new(1.0, 1.0, 1.0)
    }
    pub fn screw_rate() -> f64 {
        1.5
    }
    pub fn screw_advance() -> f64 {
        0.7
    }
}

impl FrameKind {
    /// Built-in family with default parameters.
    pub fn default_for(id: &str) -> Option<FrameKind> {
        Some(match id {
            "identity" => FrameKind::Identity,
            "uniform_translation" => FrameKind::UniformTranslation {
                velocity: defaults::translation_velocity(),
                origin: defaults::translation_origin(),
            },
            "accelerated_translation" => FrameKind::AcceleratedTranslation { coeffs: defaults::accel_coeffs() },
            "constant_rotation" => FrameKind::ConstantRotation {
                axis: defaults::z_axis(),
                rate: defaults::rotation_rate(),
            },
            "wobble" => FrameKind::Wobble { angles: defaults::wobble_angles() },
            "screw" => FrameKind::Screw {
                axis: defaults::screw_axis(),
                rate: defaults::screw_rate(),
                advance: defaults::screw_advance(),
                origin: Vec3::ZERO,
            },
            _ => return None,
        })
    }

    pub fn id(&self) -> &'static str {
        match self {
            FrameKind::Identity => "identity",
            FrameKind::UniformTranslation { .. } => "uniform_translation",
            FrameKind::AcceleratedTranslation { .. } => "accelerated_translation",
            FrameKind::ConstantRotation { .. } => "constant_rotation",
            FrameKind::Wobble { .. } => "wobble",
            FrameKind::Screw { .. } => "screw",
        }
    }

    /// Parameter keys accepted for a frame id (besides `kind` and `fd_fallback`).
    pub fn param_keys(id: &str) -> &'static [&'static str] {
        match id {
            "uniform_translation" => &["velocity", "origin"],
            "accelerated_translation" => &["coeffs"],
            "constant_rotation" => &["axis", "rate"],
            "wobble" => &["angles"],
            "screw" => &["axis", "rate", "advance", "origin"],
            _ => &[],
        }
    }
}

/// A frame entry of a scenario: family parameters plus derivative policy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameSpec {
    #[serde(flatten)]
    pub kind: FrameKind,
    /// Force the finite-difference path for every frame derivative.
    #[serde(default)]
    pub fd_fallback: bool,
}

impl FrameSpec {
    pub fn default_for(id: &str) -> Option<FrameSpec> {
        FrameKind::default_for(id).map(|kind| FrameSpec { kind, fd_fallback: false })
    }

    pub fn label(&self) -> String {
        if self.fd_fallback {
            format!("{}(fd)", self.kind.id())
        } else {
            self.kind.id().to_string()
        }
    }

    pub fn build(&self) -> Result<RigidFrameMotion> {
        let finite = |v: &Vec3, what: &str| -> Result<()> {
            if v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!("{what} must be finite")))
            }
        };
        let name = self.label();
        let frame = match &self.kind {
            FrameKind::Identity => RigidFrameMotion::new(name, Identity),
            FrameKind::UniformTranslation { velocity, origin } => {
                finite(velocity, "velocity")?;
                finite(origin, "origin")?;
                RigidFrameMotion::new(name, UniformTranslation::new(*origin, *velocity))
            }
            FrameKind::AcceleratedTranslation { coeffs } => {
                RigidFrameMotion::new(name, AcceleratedTranslation { coeffs: *coeffs })
            }
            FrameKind::ConstantRotation { axis, rate } => {
                check_rate(*rate)?;
                RigidFrameMotion::new(name, ConstantRotation::new(*axis, *rate)?)
            }
            FrameKind::Wobble { angles } => RigidFrameMotion::new(name, Wobble { angles: *angles }),
            FrameKind::Screw { axis, rate, advance, origin } => {
                check_rate(*rate)?;
                finite(origin, "origin")?;
                if !advance.is_finite() {
                    return Err(Error::InvalidParameter("advance must be finite".into()));
                }
                RigidFrameMotion::new(name, Screw::new(*axis, *rate, *advance, *origin)?)
            }
        };
        Ok(if self.fd_fallback {
            frame.with_mode(DerivativeMode::FiniteDifference)
        } else {
            frame
        })
    }
}

fn check_rate(rate: f64) -> Result<()> {
    if rate.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter("rotation rate must be finite".into()))
    }
}
