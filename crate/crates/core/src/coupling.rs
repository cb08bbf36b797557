//! Coupling constant `g`, its reparametrization `s = (1 - g^2) / (1 + g^2)`,
//! and the "true coupling" functions `b(g)` that change sign under `g -> 1/g`.
//!
//! The inversion `g -> 1/g` is the strong/weak duality; on `s` it acts as
//! plain negation, which is what the rest of the crate relies on.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// `s = (1 - g^2) / (1 + g^2)` for `g > 0`.
pub fn s_from_g(g: f64) -> Result<f64> {
    if !g.is_finite() || g <= 0.0 {
        return Err(Error::Domain(format!("coupling g must be positive and finite, got {g}")));
    }
    // Evaluate in terms of min(g, 1/g) so that g^2 never overflows.
    let s = if g <= 1.0 {
        let g2 = g * g;
        (1.0 - g2) / (1.0 + g2)
    } else {
        let r = 1.0 / g;
        let r2 = r * r;
        -(1.0 - r2) / (1.0 + r2)
    };
    Ok(s)
}

/// Inverse map `g = sqrt((1 - s) / (1 + s))` on `-1 < s < 1`.
pub fn g_from_s(s: f64) -> Result<f64> {
    if !s.is_finite() || s.abs() >= 1.0 {
        return Err(Error::Domain(format!("s must lie in (-1, 1), got {s}")));
    }
    Ok(((1.0 - s) / (1.0 + s)).sqrt())
}

/// The pair `(g, s)`. Both are stored so that the dual can negate `s`
/// exactly instead of re-deriving it from `1/g`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingParam {
    g: f64,
    s: f64,
}

impl CouplingParam {
    pub fn from_g(g: f64) -> Result<Self> {
        Ok(Self { g, s: s_from_g(g)? })
    }

    pub fn from_s(s: f64) -> Result<Self> {
        Ok(Self { g: g_from_s(s)?, s })
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    /// True at the self-dual point g = 1, where no partner pair exists.
    pub fn is_degenerate(&self) -> bool {
        self.s == 0.0
    }

    /// `g -> 1/g`, `s -> -s`.
    pub fn dual(&self) -> Self {
        Self {
            g: 1.0 / self.g,
            s: -self.s,
        }
    }

    /// Rejects the degenerate point; used by every duality construction.
    pub fn require_nondegenerate(&self) -> Result<f64> {
        if self.is_degenerate() {
            Err(Error::DegenerateCoupling)
        } else {
            Ok(self.s)
        }
    }
}

/// An odd function of `log g`, shared between threads.
pub type OddFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Coupling functions with `b(1/g) = -b(g)`.
#[derive(Clone)]
pub enum BFamily {
    /// `(1 - g) / (1 + g)`
    Ratio,
    /// `arctan(g) - pi/4`
    Arctan,
    /// `g - 1/g`
    Laurent,
    /// `B(ln g)` for a caller-supplied odd `B`.
    LogOdd(OddFn),
}

impl fmt::Debug for BFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl BFamily {
    /// Wraps `b` after checking oddness on a symmetric sample of `t = ln g`.
    pub fn log_odd<F>(b: F) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        for i in 1..=200 {
            let t = 0.05 * i as f64;
            let (bp, bm) = (b(t), b(-t));
            if !bp.is_finite() || !bm.is_finite() {
                continue;
            }
            if (bp + bm).abs() > 1e-12 * (1.0 + bp.abs()) {
                return Err(Error::Domain(format!(
                    "log_odd family requires an odd function: B({t}) + B(-{t}) = {}",
                    bp + bm
                )));
            }
        }
        if b(0.0) != 0.0 {
            return Err(Error::Domain("log_odd family requires B(0) = 0".into()));
        }
        Ok(BFamily::LogOdd(Arc::new(b)))
    }

    pub fn name(&self) -> &'static str {
        match self {
            BFamily::Ratio => "ratio",
            BFamily::Arctan => "arctan",
            BFamily::Laurent => "laurent",
            BFamily::LogOdd(_) => "log_odd",
        }
    }

    pub fn builtin() -> [BFamily; 3] {
        [BFamily::Ratio, BFamily::Arctan, BFamily::Laurent]
    }

    pub fn eval(&self, g: f64) -> Result<f64> {
        if !g.is_finite() || g <= 0.0 {
            return Err(Error::Domain(format!("coupling g must be positive and finite, got {g}")));
        }
        let b = match self {
            BFamily::Ratio => (1.0 - g) / (1.0 + g),
            // arctan(1/g) = pi/2 - arctan(g); for g > 1 evaluate the mirrored
            // branch so that the two halves cancel to the last bit.
            BFamily::Arctan => {
                if g <= 1.0 {
                    g.atan() - std::f64::consts::FRAC_PI_4
                } else {
                    std::f64::consts::FRAC_PI_4 - (1.0 / g).atan()
                }
            }
            BFamily::Laurent => g - 1.0 / g,
            BFamily::LogOdd(b) => b(g.ln()),
        };
        if !b.is_finite() {
            return Err(Error::Range {
                family: self.name().into(),
                detail: format!("b({g}) is not finite"),
            });
        }
        Ok(b)
    }
}

/// Result of sampling `b(1/g) + b(g)` over a set of couplings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AntisymmetryReport {
    pub max_residual: f64,
    pub max_abs_b: f64,
}

pub fn antisymmetry_report(family: &BFamily, g_samples: &[f64]) -> Result<AntisymmetryReport> {
    if g_samples.is_empty() {
        return Err(Error::Usage("antisymmetry report needs at least one sample".into()));
    }
    let mut report = AntisymmetryReport {
        max_residual: 0.0,
        max_abs_b: 0.0,
    };
    for &g in g_samples {
        let b = family.eval(g)?;
        let b_inv = family.eval(1.0 / g)?;
        report.max_residual = report.max_residual.max((b + b_inv).abs());
        report.max_abs_b = report.max_abs_b.max(b.abs()).max(b_inv.abs());
    }
    Ok(report)
}

/// `n` points spaced evenly in `log g` between `lo` and `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2 && lo > 0.0 && hi > lo);
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
        .collect()
}
