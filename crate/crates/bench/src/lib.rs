//! Fixtures shared by the criterion benches.

use framekit_core::fields::Field;
use framekit_core::frames::FrameSpec;
use framekit_core::{CheckId, Scenario};

/// Two rotating frames, two fields and every check, on `samples` points.
pub fn small_scenario(samples: usize) -> Scenario {
    let frames = ["constant_rotation", "wobble"]
        .iter()
        .map(|id| FrameSpec::default_for(id).expect("builtin frame"))
        .collect();
    let fields = ["taylor_green", "gaussian_T"]
        .iter()
        .map(|id| Field::default_for(id).expect("builtin field"))
        .collect();
    let mut s = Scenario::new(frames, fields, CheckId::ALL.to_vec());
    s.samples = samples;
    s.seed = 1;
    s
}
