use crate::error::{Error, Result};

/// Uniform grid on `[-L, L]` with an odd number of nodes and `x = 0` a node.
///
/// Nodes are generated as `(i - mid) * h`, so the grid is exactly symmetric
/// and the origin is exactly zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    half_extent: f64,
    points: usize,
    h: f64,
}

impl Grid {
    pub fn new(half_extent: f64, points: usize) -> Result<Self> {
        if !half_extent.is_finite() || half_extent <= 0.0 {
            return Err(Error::Domain(format!("half extent must be positive, got {half_extent}")));
        }
        if points < 5 || points.is_multiple_of(2) {
            return Err(Error::Domain(format!(
                "grid needs an odd number of points >= 5, got {points}"
            )));
        }
        Ok(Self {
            half_extent,
            points,
            h: 2.0 * half_extent / (points - 1) as f64,
        })
    }

    /// Grid reaching at least `half_extent` with step as close to `step` as
    /// the odd node count allows (the step is never larger than requested).
    pub fn with_step(half_extent: f64, step: f64) -> Result<Self> {
        if !step.is_finite() || step <= 0.0 {
            return Err(Error::Domain(format!("step must be positive, got {step}")));
        }
        let half_nodes = (half_extent / step - 1e-9).ceil().max(2.0) as usize;
        Self::new(half_extent, 2 * half_nodes + 1)
    }

    pub fn half_extent(&self) -> f64 {
        self.half_extent
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn step(&self) -> f64 {
        self.h
    }

    /// Index of `x = 0`.
    pub fn mid(&self) -> usize {
        (self.points - 1) / 2
    }

    pub fn x(&self, i: usize) -> f64 {
        (i as f64 - self.mid() as f64) * self.h
    }

    pub fn xs(&self) -> Vec<f64> {
        (0..self.points).map(|i| self.x(i)).collect()
    }

    /// Nonnegative nodes `0, h, ..., L`.
    pub fn half_xs(&self) -> Vec<f64> {
        (0..=self.mid()).map(|j| j as f64 * self.h).collect()
    }

    /// Full-grid samples from nonnegative-half samples of an even function.
    pub fn even_extension(&self, half: &[f64]) -> Vec<f64> {
        debug_assert_eq!(half.len(), self.mid() + 1);
        let m = self.mid();
        (0..self.points)
            .map(|i| if i >= m { half[i - m] } else { half[m - i] })
            .collect()
    }

    /// Full-grid samples from nonnegative-half samples of an odd function.
    pub fn odd_extension(&self, half: &[f64]) -> Vec<f64> {
        debug_assert_eq!(half.len(), self.mid() + 1);
        let m = self.mid();
        (0..self.points)
            .map(|i| if i >= m { half[i - m] } else { -half[m - i] })
            .collect()
    }
}

/// Central-difference derivative at interior nodes; the two end entries
/// use one-sided second-order stencils.
pub fn central_diff(f: &[f64], h: f64) -> Vec<f64> {
    let n = f.len();
    assert!(n >= 3);
    let mut d = vec![0.0; n];
    for i in 1..n - 1 {
        d[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
    }
    d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
    d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
    d
}
