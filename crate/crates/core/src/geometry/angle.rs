use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

/// An angle in radians, normalized to `(-pi, pi]`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(from = "f64", into = "f64")]
pub struct Angle(f64);

impl Angle {
    pub fn new(radians: f64) -> Self {
        Angle(normalize(radians))
    }

    #[inline]
    pub fn radians(self) -> f64 {
        self.0
    }

    /// Unit vector `(cos, sin)`.
    #[inline]
    pub fn direction(self) -> (f64, f64) {
        let (s, c) = self.0.sin_cos();
        (c, s)
    }
}

impl From<f64> for Angle {
    fn from(value: f64) -> Self {
        Angle::new(value)
    }
}

impl From<Angle> for f64 {
    fn from(value: Angle) -> Self {
        value.0
    }
}

/// Maps any real to `(-pi, pi]` by subtracting multiples of `2 pi`.
pub fn normalize(radians: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let shifted = radians - two_pi * ((radians - PI) / two_pi).ceil();
    // Rounding can leave the value a hair below -pi.
    if shifted <= -PI {
        shifted + two_pi
    } else {
        shifted
    }
}
