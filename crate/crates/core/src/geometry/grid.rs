use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};

/// Uniform angle grid `theta_i = 2 pi i / n - pi` for `i = 1..=n`, together
/// with the dyadic bandwidth grid `{0} ∪ {2^j : 2^j <= floor(n/16)}`.
///
/// Indices are 1-based throughout the crate so that `theta_{n/2} = 0` and
/// `theta_{3n/4} = pi/2`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridSpec {
    n: usize,
    #[serde(skip)]
    cos_step: f64,
    #[serde(skip)]
    bandwidths: Vec<usize>,
}

impl GridSpec {
    pub const MIN_SIZE: usize = 16;

    pub fn new(n: usize) -> Result<Self> {
        if n < Self::MIN_SIZE {
            return Err(Error::InvalidGrid { n, reason: "must be at least 16" });
        }
        if !n.is_multiple_of(4) {
            return Err(Error::InvalidGrid { n, reason: "must be divisible by 4" });
        }
        let mut bandwidths = vec![0];
        let mut k = 1;
        while k <= n / 16 {
            bandwidths.push(k);
            k *= 2;
        }
        Ok(GridSpec { n, cos_step: (2.0 * PI / n as f64).cos(), bandwidths })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Grid spacing `2 pi / n`.
    #[inline]
    pub fn step(&self) -> f64 {
        2.0 * PI / self.n as f64
    }

    /// `cos(2 pi / n)`, the coefficient of the adjacent-triple constraint.
    #[inline]
    pub fn cos_step(&self) -> f64 {
        self.cos_step
    }

    /// `theta_i` for any integer `i`; not reduced modulo `2 pi`.
    #[inline]
    pub fn theta(&self, i: isize) -> f64 {
        2.0 * PI * i as f64 / self.n as f64 - PI
    }

    pub fn thetas(&self) -> Vec<f64> {
        (1..=self.n as isize).map(|i| self.theta(i)).collect()
    }

    /// Position in `0..n` of the cyclic index `i` (so `i = n` and `i = 0`
    /// both refer to `theta_n = pi`).
    #[inline]
    pub fn slot(&self, i: isize) -> usize {
        (i - 1).rem_euclid(self.n as isize) as usize
    }

    /// The bandwidth grid, strictly increasing, starting at 0.
    pub fn bandwidths(&self) -> &[usize] {
        &self.bandwidths
    }

    pub fn max_bandwidth(&self) -> usize {
        *self.bandwidths.last().expect("bandwidth grid always contains 0")
    }

    pub fn contains_bandwidth(&self, k: usize) -> bool {
        self.bandwidths.binary_search(&k).is_ok()
    }

    pub fn check_index(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.n {
            Err(Error::InvalidIndex { index: i, n: self.n })
        } else {
            Ok(())
        }
    }

    /// The grid index whose angle is closest to `theta` (cyclically).
    pub fn nearest_index(&self, theta: f64) -> usize {
        let t = (theta + PI) / self.step();
        let i = t.round() as isize;
        self.slot(i) + 1
    }

    /// The grid index exactly at `theta`, if one exists (within `1e-9` rad).
    pub fn index_of_angle(&self, theta: f64) -> Option<usize> {
        let i = self.nearest_index(theta);
        let diff = super::angle::normalize(theta - self.theta(i as isize));
        (diff.abs() < 1e-9).then_some(i)
    }
}
