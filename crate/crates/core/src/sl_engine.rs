//! Even solution of `y'' = s^2 k(x) y` with `y(0) = 1`, `y'(0) = 0`.
//!
//! `y` itself grows like `exp(|s| omega x)` or faster, so the solver carries
//! the log-derivative `u = y'/y` instead. It obeys the Riccati equation
//! `u' = s^2 k - u^2` with `u(0) = 0` and stays bounded wherever `y` has no
//! zero. `ln y` is recovered by quadrature when needed.

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::kernel::Kernel;

/// `|u|` above this is treated as a pole of `u`, i.e. a zero of `y`.
pub const BLOWUP_LIMIT: f64 = 1e8;

/// Hard cap on terms of the harmonic-kernel power series.
pub const SERIES_MAX_TERMS: usize = 500;

/// Log-derivative `u = y'/y` of the even solution on the nonnegative half
/// of a grid. `u(-x) = -u(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LogDerivProfile {
    s: f64,
    h: f64,
    u: Vec<f64>,
}

impl LogDerivProfile {
    /// Builds a profile from samples at `0, h, 2h, ...`. Mostly useful for
    /// tests and for feeding closed-form log-derivatives into the pipeline.
    pub fn from_samples(s: f64, h: f64, u: Vec<f64>) -> Result<Self> {
        if u.first() != Some(&0.0) {
            return Err(Error::Input("an even solution has u(0) = 0".into()));
        }
        Ok(Self { s, h, u })
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn step(&self) -> f64 {
        self.h
    }

    /// Samples at `x_j = j h`, `j = 0..=mid`.
    pub fn half(&self) -> &[f64] {
        &self.u
    }

    /// Odd extension onto the full grid.
    pub fn full(&self, grid: &Grid) -> Result<Vec<f64>> {
        self.check_grid(grid)?;
        Ok(grid.odd_extension(&self.u))
    }

    /// `u(L)`, the asymptotic log-slope of `y`.
    pub fn edge_value(&self) -> f64 {
        self.u[self.u.len() - 1]
    }

    pub(crate) fn check_grid(&self, grid: &Grid) -> Result<()> {
        if grid.mid() + 1 != self.u.len() || grid.step() != self.h {
            return Err(Error::Usage(format!(
                "profile has {} half-grid samples at h = {}, grid has {} at h = {}",
                self.u.len(),
                self.h,
                grid.mid() + 1,
                grid.step()
            )));
        }
        Ok(())
    }

    /// `max |u' + u^2 - s^2 k|` over interior half-grid nodes, with `u'`
    /// from central differences.
    pub fn riccati_residual(&self, kernel: &Kernel) -> f64 {
        let s2 = self.s * self.s;
        let h = self.h;
        (1..self.u.len() - 1)
            .map(|j| {
                let du = (self.u[j + 1] - self.u[j - 1]) / (2.0 * h);
                (du + self.u[j] * self.u[j] - s2 * kernel.eval(j as f64 * h)).abs()
            })
            .fold(0.0, f64::max)
    }
}

/// Integrates `u' = s^2 k(x) - u^2` from `u(0) = 0` out to `x = L` with the
/// classical fourth-order Runge-Kutta method at the grid step.
///
/// Only `s^2` enters the arithmetic, so `+s` and `-s` give bit-identical
/// profiles.
pub fn riccati_logderiv(kernel: &Kernel, s: f64, grid: &Grid) -> Result<LogDerivProfile> {
    if s == 0.0 {
        return Err(Error::DegenerateCoupling);
    }
    if !s.is_finite() {
        return Err(Error::Domain(format!("s must be finite, got {s}")));
    }
    let limit = kernel.admissible_half_extent(s);
    if grid.half_extent() >= limit * (1.0 + 1e-12) {
        return Err(Error::Domain(format!(
            "{kernel} admits |x| < {limit} at s = {s}, grid reaches {}",
            grid.half_extent()
        )));
    }

    let s2 = s * s;
    let h = grid.step();
    let n = grid.mid();
    let rhs = |x: f64, u: f64| s2 * kernel.eval(x) - u * u;

    let mut u = Vec::with_capacity(n + 1);
    u.push(0.0);
    let mut cur = 0.0f64;
    for j in 0..n {
        let x = j as f64 * h;
        let xm = (j as f64 + 0.5) * h;
        let xn = (j + 1) as f64 * h;
        let k1 = rhs(x, cur);
        let k2 = rhs(xm, cur + 0.5 * h * k1);
        let k3 = rhs(xm, cur + 0.5 * h * k2);
        let k4 = rhs(xn, cur + h * k3);
        cur += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if !cur.is_finite() || cur.abs() > BLOWUP_LIMIT {
            return Err(Error::SingularProfile {
                x: xn,
                limit: BLOWUP_LIMIT,
            });
        }
        u.push(cur);
    }
    Ok(LogDerivProfile { s, h, u })
}

/// `ln y` on the half-grid by cumulative fourth-order quadrature of `u`.
///
/// Even nodes use composite Simpson; odd nodes add one interval with the
/// three-point rule, so every node carries an O(h^4) error.
pub fn log_y_from_u(profile: &LogDerivProfile, grid: &Grid) -> Result<Vec<f64>> {
    profile.check_grid(grid)?;
    let f = &profile.u;
    let h = profile.h;
    let n = f.len();
    let mut out = vec![0.0; n];
    if n == 1 {
        return Ok(out);
    }
    if n == 2 {
        out[1] = 0.5 * h * (f[0] + f[1]);
        return Ok(out);
    }
    for j in 1..n {
        out[j] = if j % 2 == 0 {
            out[j - 2] + h / 3.0 * (f[j - 2] + 4.0 * f[j - 1] + f[j])
        } else if j + 1 < n {
            out[j - 1] + h / 12.0 * (5.0 * f[j - 1] + 8.0 * f[j] - f[j + 1])
        } else {
            out[j - 1] + h / 12.0 * (-f[j - 2] + 8.0 * f[j - 1] + 5.0 * f[j])
        };
    }
    Ok(out)
}

/// A series coefficient: exact while it fits in `u128`, floating-point
/// beyond (from `p = 14` on).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SeriesCoeff {
    Exact(u128),
    Float(f64),
}

impl SeriesCoeff {
    pub fn as_f64(&self) -> f64 {
        match *self {
            SeriesCoeff::Exact(c) => c as f64,
            SeriesCoeff::Float(c) => c,
        }
    }
}

/// `c_p = prod_{j=1..p} (4j - 1)(4j)`.
pub fn series_coeff_c(p: u32) -> Result<SeriesCoeff> {
    if p == 0 {
        return Err(Error::Domain("series coefficient index starts at 1".into()));
    }
    let mut acc: u128 = 1;
    for j in 1..=p as u128 {
        match acc.checked_mul((4 * j - 1) * (4 * j)) {
            Some(next) => acc = next,
            None => return Ok(SeriesCoeff::Float(series_coeff_c_f64(p)?)),
        }
    }
    Ok(SeriesCoeff::Exact(acc))
}

/// Floating-point `c_p` for any `p >= 1`.
pub fn series_coeff_c_f64(p: u32) -> Result<f64> {
    if p == 0 {
        return Err(Error::Domain("series coefficient index starts at 1".into()));
    }
    Ok((1..=p).map(|j| ((4 * j - 1) * (4 * j)) as f64).product())
}

/// Harmonic-kernel series evaluated with an overflow-safe running scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarmonicSeries {
    /// `ln y(x)`
    pub ln_y: f64,
    /// `u(x) = y'(x)/y(x)`
    pub logderiv: f64,
    pub terms: usize,
}

/// Sums `y = 1 + sum_p (s omega)^(2p) x^(4p) / c_p` and its derivative.
///
/// Stops once the next term is below `tol` times the partial sum for both
/// `y` and `y'`.
pub fn harmonic_series(s: f64, omega: f64, x: f64, tol: f64) -> Result<HarmonicSeries> {
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("series tolerance must be positive, got {tol}")));
    }
    if x == 0.0 {
        return Ok(HarmonicSeries {
            ln_y: 0.0,
            logderiv: 0.0,
            terms: 0,
        });
    }
    const RESCALE: f64 = 1e250;
    let ax = x.abs();
    let w = (s * omega * x * x).powi(2);
    let mut term = 1.0f64;
    let mut sum_y = 1.0f64;
    let mut sum_dy = 0.0f64;
    let mut log_scale = 0.0f64;
    for p in 1..=SERIES_MAX_TERMS {
        let pf = p as f64;
        term *= w / ((4.0 * pf - 1.0) * (4.0 * pf));
        // d/dx of x^(4p) contributes 4p/x
        let dterm = term * 4.0 * pf / ax;
        sum_y += term;
        sum_dy += dterm;
        if term <= tol * sum_y && dterm <= tol * sum_dy {
            let logderiv = (sum_dy / sum_y).copysign(x);
            return Ok(HarmonicSeries {
                ln_y: sum_y.ln() + log_scale,
                logderiv,
                terms: p,
            });
        }
        if sum_y > RESCALE {
            term /= RESCALE;
            sum_y /= RESCALE;
            sum_dy /= RESCALE;
            log_scale += RESCALE.ln();
        }
    }
    Err(Error::Convergence {
        terms: SERIES_MAX_TERMS,
    })
}

/// `y(x)` of the harmonic-kernel series, normalized to `y(0) = 1`.
pub fn harmonic_series_y(s: f64, omega: f64, x: f64, tol: f64) -> Result<f64> {
    Ok(harmonic_series(s, omega, x, tol)?.ln_y.exp())
}

/// `I_{3/4}(z) / I_{-1/4}(z)` from the large-argument expansion
/// `I_nu(z) ~ e^z / sqrt(2 pi z) * sum_k (-1)^k a_k(nu) / z^k`.
pub(crate) fn bessel_ratio_asymptotic(z: f64) -> f64 {
    fn series(nu: f64, z: f64) -> f64 {
        let mu = 4.0 * nu * nu;
        let mut term = 1.0f64;
        let mut sum = 1.0f64;
        for k in 1..60 {
            let kf = k as f64;
            let next = -term * (mu - (2.0 * kf - 1.0).powi(2)) / (kf * 8.0 * z);
            if next.abs() >= term.abs() {
                break;
            }
            term = next;
            sum += term;
            if term.abs() < 1e-18 * sum.abs() {
                break;
            }
        }
        sum
    }
    series(0.75, z) / series(-0.25, z)
}

/// Log-derivative of the harmonic-kernel even solution at a single point:
/// `u = |s| omega x R(z)`, `z = |s| omega x^2 / 2`. Uses the power series for
/// moderate `z` and the asymptotic Bessel ratio beyond.
pub fn harmonic_logderiv(s: f64, omega: f64, x: f64) -> Result<f64> {
    let so = s.abs() * omega;
    let z = 0.5 * so * x * x;
    if z > 150.0 {
        Ok(so * x * bessel_ratio_asymptotic(z))
    } else {
        Ok(harmonic_series(s, omega, x, 1e-17)?.logderiv)
    }
}
