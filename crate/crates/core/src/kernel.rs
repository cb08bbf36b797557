//! Even kernels `k(x)`: the coupling-independent part of the free Hamiltonian
//! `-d^2/dx^2 + k(x)` around which a dual pair is built.

use std::fmt;
use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};

/// Relative tolerance for accepting a tabulated kernel as even.
const TABLE_SYMMETRY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum Kernel {
    /// `k = omega^2`
    ConstantSquare { omega: f64 },
    /// `k = -omega^2`
    NegConstantSquare { omega: f64 },
    /// `k = omega^2 x^2`
    HarmonicSquare { omega: f64 },
    /// `k = sum_j c_j x^(2j)`
    EvenPolynomial(Vec<f64>),
    EvenTabulated(TabulatedKernel),
}

impl Kernel {
    pub fn constant(omega: f64) -> Result<Self> {
        check_omega(omega)?;
        Ok(Kernel::ConstantSquare { omega })
    }

    pub fn neg_constant(omega: f64) -> Result<Self> {
        check_omega(omega)?;
        Ok(Kernel::NegConstantSquare { omega })
    }

    pub fn harmonic(omega: f64) -> Result<Self> {
        check_omega(omega)?;
        Ok(Kernel::HarmonicSquare { omega })
    }

    pub fn even_polynomial(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() || coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::Input("polynomial kernel needs finite coefficients".into()));
        }
        Ok(Kernel::EvenPolynomial(coeffs))
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Kernel::ConstantSquare { omega } => omega * omega,
            Kernel::NegConstantSquare { omega } => -omega * omega,
            Kernel::HarmonicSquare { omega } => omega * omega * x * x,
            Kernel::EvenPolynomial(c) => {
                let x2 = x * x;
                c.iter().rev().fold(0.0, |acc, &cj| acc * x2 + cj)
            }
            Kernel::EvenTabulated(t) => t.eval(x),
        }
    }

    /// Characteristic frequency used for default steps and tolerances.
    pub fn omega(&self) -> f64 {
        match self {
            Kernel::ConstantSquare { omega }
            | Kernel::NegConstantSquare { omega }
            | Kernel::HarmonicSquare { omega } => *omega,
            Kernel::EvenPolynomial(c) => c
                .iter()
                .enumerate()
                .map(|(j, cj)| cj.abs().powf(1.0 / (2.0 * j as f64 + 2.0)))
                .fold(0.0, f64::max)
                .max(f64::MIN_POSITIVE),
            Kernel::EvenTabulated(t) => t.max_abs().sqrt().max(f64::MIN_POSITIVE),
        }
    }

    /// Largest `L` on which the kernel may be used at coupling `s`.
    /// Infinite unless the kernel is tabulated or the even solution has a
    /// zero (the trigonometric case).
    pub fn admissible_half_extent(&self, s: f64) -> f64 {
        match self {
            Kernel::NegConstantSquare { omega } => {
                std::f64::consts::FRAC_PI_2 / (s.abs() * omega)
            }
            Kernel::EvenTabulated(t) => t.half_extent(),
            _ => f64::INFINITY,
        }
    }

    /// Default box half-width for spectral work at coupling `s`.
    pub fn default_half_extent(&self, s: f64) -> f64 {
        let so = s.abs() * self.omega();
        match self {
            Kernel::ConstantSquare { .. } => 12.0 / so,
            Kernel::HarmonicSquare { .. } | Kernel::EvenPolynomial(_) => {
                f64::max(8.0, 6.0 / so.sqrt())
            }
            Kernel::NegConstantSquare { .. } => 0.95 * self.admissible_half_extent(s),
            Kernel::EvenTabulated(t) => t.half_extent(),
        }
    }

    /// Default Riccati step `1e-3 * max(1, 1/(|s| omega))`.
    pub fn default_step(&self, s: f64) -> f64 {
        1e-3 * f64::max(1.0, 1.0 / (s.abs() * self.omega()))
    }

    pub fn is_nonnegative(&self) -> bool {
        match self {
            Kernel::ConstantSquare { .. } | Kernel::HarmonicSquare { .. } => true,
            Kernel::NegConstantSquare { .. } => false,
            Kernel::EvenPolynomial(c) => c.iter().all(|&cj| cj >= 0.0),
            Kernel::EvenTabulated(t) => t.ks.iter().all(|&k| k >= 0.0),
        }
    }

    /// Short label used in file metadata.
    pub fn label(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kernel::ConstantSquare { omega } => write!(f, "constant(omega={omega})"),
            Kernel::NegConstantSquare { omega } => write!(f, "neg-constant(omega={omega})"),
            Kernel::HarmonicSquare { omega } => write!(f, "harmonic(omega={omega})"),
            Kernel::EvenPolynomial(c) => {
                let terms: Vec<String> = c.iter().map(|v| v.to_string()).collect();
                write!(f, "poly(coeffs=[{}])", terms.join(","))
            }
            Kernel::EvenTabulated(t) => write!(f, "table(points={})", t.xs.len()),
        }
    }
}

fn check_omega(omega: f64) -> Result<()> {
    if omega.is_finite() && omega > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("omega must be positive and finite, got {omega}")))
    }
}

/// Kernel samples on a symmetric, strictly increasing abscissa; linearly
/// interpolated in between.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedKernel {
    xs: Vec<f64>,
    ks: Vec<f64>,
}

#[derive(Deserialize)]
struct TableRow {
    x: f64,
    k: f64,
}

impl TabulatedKernel {
    pub fn new(xs: Vec<f64>, ks: Vec<f64>) -> Result<Self> {
        if xs.len() != ks.len() || xs.len() < 3 {
            return Err(Error::Input("table needs at least 3 (x, k) rows".into()));
        }
        if xs.iter().chain(&ks).any(|v| !v.is_finite()) {
            return Err(Error::Input("table contains non-finite values".into()));
        }
        if xs.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Input("table x column must be strictly increasing".into()));
        }
        let n = xs.len();
        let xscale = xs[n - 1].abs().max(xs[0].abs());
        let kscale = ks.iter().fold(0.0f64, |m, k| m.max(k.abs())).max(f64::MIN_POSITIVE);
        for i in 0..n {
            let j = n - 1 - i;
            if (xs[i] + xs[j]).abs() > TABLE_SYMMETRY_TOL * xscale {
                return Err(Error::Input(format!(
                    "table abscissa is not symmetric: x[{i}] = {}, x[{j}] = {}",
                    xs[i], xs[j]
                )));
            }
            if (ks[i] - ks[j]).abs() > TABLE_SYMMETRY_TOL * kscale {
                return Err(Error::Input(format!(
                    "table kernel is not even: k({}) = {}, k({}) = {}",
                    xs[i], ks[i], xs[j], ks[j]
                )));
            }
        }
        Ok(Self { xs, ks })
    }

    /// Reads a two-column `x,k` CSV with a header row.
    pub fn from_csv_path(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Self::from_csv_reader(file)
    }

    pub fn from_csv_reader<R: std::io::Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(reader);
        let headers = rdr.headers()?.clone();
        if headers.len() != 2 || &headers[0] != "x" || &headers[1] != "k" {
            return Err(Error::Input(format!(
                "table header must be `x,k`, got `{}`",
                headers.iter().collect::<Vec<_>>().join(",")
            )));
        }
        let mut xs = Vec::new();
        let mut ks = Vec::new();
        for row in rdr.deserialize() {
            let row: TableRow = row?;
            xs.push(row.x);
            ks.push(row.k);
        }
        Self::new(xs, ks)
    }

    pub fn half_extent(&self) -> f64 {
        self.xs[self.xs.len() - 1]
    }

    fn max_abs(&self) -> f64 {
        self.ks.iter().fold(0.0, |m, k| m.max(k.abs()))
    }

    /// Linear interpolation; outside the table the end value is held.
    pub fn eval(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if x <= self.xs[0] {
            return self.ks[0];
        }
        if x >= self.xs[n - 1] {
            return self.ks[n - 1];
        }
        let j = self.xs.partition_point(|&xi| xi <= x);
        let (x0, x1) = (self.xs[j - 1], self.xs[j]);
        let t = (x - x0) / (x1 - x0);
        self.ks[j - 1] + t * (self.ks[j] - self.ks[j - 1])
    }
}
