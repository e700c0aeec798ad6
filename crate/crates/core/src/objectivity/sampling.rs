use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensor::Vec3;

/// Axis-aligned sampling box in `s`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplingBox {
    pub min: Vec3,
    pub max: Vec3,
}

impl Default for SamplingBox {
    fn default() -> Self {
        SamplingBox { min: Vec3::new(-1.0, -1.0, -1.0), max: Vec3::new(1.0, 1.0, 1.0) }
    }
}

impl SamplingBox {
    pub fn validate(&self) -> Result<()> {
        for i in 0..3 {
            if !(self.min[i].is_finite() && self.max[i].is_finite() && self.min[i] < self.max[i]) {
                return Err(Error::InvalidParameter(format!(
                    "box: min must be < max on every axis (axis {}: {} .. {})",
                    i + 1,
                    self.min[i],
                    self.max[i]
                )));
            }
        }
        Ok(())
    }
}

/// Interval of sampled times.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeWindow {
    pub start: f64,
    pub end: f64,
}

impl Default for TimeWindow {
    fn default() -> Self {
        TimeWindow { start: 0.0, end: 1.0 }
    }
}

impl TimeWindow {
    pub fn validate(&self) -> Result<()> {
        if self.start.is_finite() && self.end.is_finite() && self.start <= self.end {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "time: start must be <= end ({} .. {})",
                self.start, self.end
            )))
        }
    }
}

/// An inertial point `x` and a time `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplePoint {
    pub x: Vec3,
    pub t: f64,
}

/// Draws `n` points uniformly from `bbox × window`.
///
/// The sequence is a prefix-stable function of `seed`: the first `n` points
/// are the same for every larger `n`.
pub fn draw_samples(bbox: &SamplingBox, window: &TimeWindow, n: usize, seed: u64) -> Vec<SamplePoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let u: [f64; 3] = rng.random();
            let x = Vec3::from_fn(|i| bbox.min[i] + (bbox.max[i] - bbox.min[i]) * u[i]);
            let t = window.start + (window.end - window.start) * rng.random::<f64>();
            SamplePoint { x, t }
        })
        .collect()
}
