//! Numerical verification of how kinematic and dynamic fluid quantities
//! transform between an inertial frame `s` and a rigidly moving frame `s'`.
//!
//! Index conventions: `α_ij = e_i · e'_j`, so the columns of `α` are the
//! `s`-components of the primed basis vectors. Velocity gradients are stored
//! as `J[i][j] = ∂_i v_j`.

pub mod diffops;
pub mod error;
pub mod fields;
pub mod frames;
pub mod harness;
pub mod objectivity;
pub mod tensor;

pub use diffops::{FdConfig, StencilOrder};
pub use error::{Error, Result};
pub use fields::{Field, FlowField, ScalarField};
pub use frames::{omega_from_alpha, AngularVelocity, FrameSpec, RigidFrameMotion};
pub use harness::{emit_report, parse_scenario, run_suite, Report, ReportFormat, Scenario};
pub use objectivity::{CheckId, CheckResult, Physics, Verdict};
pub use tensor::{Mat3, OrthMat3, Vec3};
