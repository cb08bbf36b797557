//! Bound states of `-d^2/dx^2 + V(x)` in a Dirichlet box.
//!
//! The three-point discretization gives a symmetric tridiagonal matrix with
//! a constant negative off-diagonal. Eigenvalues come from Sturm-sequence
//! bisection, eigenvectors from inverse iteration.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::sl_engine::LogDerivProfile;
use crate::susy::Superpotential;

/// Absolute bisection tolerance on eigenvalues.
pub const EIGEN_TOL: f64 = 1e-10;

/// `-d^2/dx^2 + V` on the interior nodes of a grid, walls at `x = +-L`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteHamiltonian {
    h: f64,
    half_extent: f64,
    diag: Vec<f64>,
    off: f64,
    potential: Vec<f64>,
}

pub fn discretize(v: &[f64], grid: &Grid) -> Result<DiscreteHamiltonian> {
    if v.len() != grid.points() {
        return Err(Error::Usage(format!(
            "potential has {} samples, grid has {} nodes",
            v.len(),
            grid.points()
        )));
    }
    if let Some((i, bad)) = v.iter().enumerate().find(|(_, x)| !x.is_finite()) {
        return Err(Error::Input(format!(
            "potential is not finite at x = {}: {bad}",
            grid.x(i)
        )));
    }
    let h = grid.step();
    let potential = v[1..v.len() - 1].to_vec();
    let diag = potential.iter().map(|vi| 2.0 / (h * h) + vi).collect();
    Ok(DiscreteHamiltonian {
        h,
        half_extent: grid.half_extent(),
        diag,
        off: -1.0 / (h * h),
        potential,
    })
}

impl DiscreteHamiltonian {
    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn step(&self) -> f64 {
        self.h
    }

    pub fn half_extent(&self) -> f64 {
        self.half_extent
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diag
    }

    pub fn off_diagonal(&self) -> f64 {
        self.off
    }

    /// Potential at the interior nodes.
    pub fn potential(&self) -> &[f64] {
        &self.potential
    }

    /// Gershgorin interval containing the whole spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let r = 2.0 * self.off.abs();
        let lo = self.diag.iter().fold(f64::INFINITY, |m, &d| m.min(d)) - r;
        let hi = self.diag.iter().fold(f64::NEG_INFINITY, |m, &d| m.max(d)) + r;
        (lo, hi)
    }

    /// Number of eigenvalues strictly below `lambda` (negative LDL^T pivots).
    pub fn count_below(&self, lambda: f64) -> usize {
        let e2 = self.off * self.off;
        let guard = f64::EPSILON * self.off.abs();
        let mut count = 0;
        let mut q = 1.0f64;
        for (i, &d) in self.diag.iter().enumerate() {
            q = if i == 0 { d - lambda } else { d - lambda - e2 / q };
            if q == 0.0 {
                q = -guard;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// Matrix-vector product with `psi` on interior nodes (walls are zero).
    pub fn apply(&self, psi: &[f64]) -> Vec<f64> {
        let n = self.dim();
        assert_eq!(psi.len(), n);
        (0..n)
            .map(|i| {
                let left = if i > 0 { psi[i - 1] } else { 0.0 };
                let right = if i + 1 < n { psi[i + 1] } else { 0.0 };
                self.diag[i] * psi[i] + self.off * (left + right)
            })
            .collect()
    }

    /// Eigenvector for an eigenvalue already located to `EIGEN_TOL`,
    /// normalized to unit 2-norm with a positive first significant entry.
    pub fn eigenvector(&self, lambda: f64) -> Vec<f64> {
        let n = self.dim();
        // deterministic start with no parity, so odd states are reachable
        let mut x: Vec<f64> = (0..n)
            .map(|i| 1.0 + 0.5 * (1.3 * i as f64 + 0.7).sin())
            .collect();
        let sigma = lambda + 1e-3 * EIGEN_TOL;
        for _ in 0..3 {
            x = solve_shifted(&self.diag, self.off, sigma, &x);
            let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            x.iter_mut().for_each(|v| *v /= norm);
        }
        let peak = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if let Some(first) = x.iter().find(|v| v.abs() > 1e-6 * peak) {
            if *first < 0.0 {
                x.iter_mut().for_each(|v| *v = -*v);
            }
        }
        x
    }
}

/// Solves `(T - sigma I) x = b` for symmetric tridiagonal `T` with constant
/// off-diagonal, by Gaussian elimination with partial pivoting.
fn solve_shifted(diag: &[f64], off: f64, sigma: f64, b: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let tiny = f64::EPSILON * off.abs().max(1.0);
    // row i after elimination: u0[i] x_i + u1[i] x_{i+1} + u2[i] x_{i+2} = y_i
    let mut u0 = vec![0.0; n];
    let mut u1 = vec![0.0; n];
    let mut u2 = vec![0.0; n];
    let mut y = b.to_vec();
    // current working row i: (a, c, 0) with a on the diagonal
    let mut a = diag[0] - sigma;
    let mut c = if n > 1 { off } else { 0.0 };
    for i in 0..n {
        if i + 1 == n {
            u0[i] = if a.abs() < tiny { tiny } else { a };
            break;
        }
        // next row: (off, diag - sigma, off)
        let (nl, nd, nr) = (off, diag[i + 1] - sigma, if i + 2 < n { off } else { 0.0 });
        if a.abs() >= nl.abs() {
            let pivot = if a.abs() < tiny { tiny } else { a };
            let m = nl / pivot;
            u0[i] = pivot;
            u1[i] = c;
            u2[i] = 0.0;
            y[i + 1] -= m * y[i];
            a = nd - m * c;
            c = nr;
        } else {
            // swap rows i and i+1
            let m = a / nl;
            u0[i] = nl;
            u1[i] = nd;
            u2[i] = nr;
            y.swap(i, i + 1);
            y[i + 1] -= m * y[i];
            a = c - m * nd;
            c = -m * nr;
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut r = y[i];
        if i + 1 < n {
            r -= u1[i] * x[i + 1];
        }
        if i + 2 < n {
            r -= u2[i] * x[i + 2];
        }
        x[i] = r / u0[i];
    }
    x
}

/// All eigenvalues `<= e_max`, ascending, each bisected to `EIGEN_TOL`.
pub fn eigen_below(hamiltonian: &DiscreteHamiltonian, e_max: f64) -> Result<Vec<f64>> {
    if !e_max.is_finite() {
        return Err(Error::Input(format!("e_max must be finite, got {e_max}")));
    }
    let (lo, _) = hamiltonian.gershgorin();
    let count = hamiltonian.count_below(e_max);
    let mut out = Vec::with_capacity(count);
    let mut lower = lo;
    for k in 0..count {
        // smallest lambda with count_below(lambda) > k
        let (mut a, mut b) = (lower, e_max);
        while b - a > EIGEN_TOL {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                break;
            }
            if hamiltonian.count_below(mid) > k {
                b = mid;
            } else {
                a = mid;
            }
        }
        let lambda = 0.5 * (a + b);
        out.push(lambda);
        lower = a;
    }
    Ok(out)
}

/// Sign changes along a vector, skipping entries below `1e-8` of the peak.
pub fn node_count(psi: &[f64]) -> usize {
    let peak = psi.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let floor = 1e-8 * peak;
    let mut last = 0.0f64;
    let mut nodes = 0;
    for &v in psi {
        if v.abs() <= floor {
            continue;
        }
        if last != 0.0 && (v > 0.0) != (last > 0.0) {
            nodes += 1;
        }
        last = v;
    }
    nodes
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sector {
    Minus,
    Plus,
}

impl Sector {
    pub fn partner(self) -> Self {
        match self {
            Sector::Minus => Sector::Plus,
            Sector::Plus => Sector::Minus,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SusyStatus {
    UnbrokenMinus,
    UnbrokenPlus,
    Broken,
    Undetermined,
}

impl SusyStatus {
    pub fn zero_mode_sector(self) -> Option<Sector> {
        match self {
            SusyStatus::UnbrokenMinus => Some(Sector::Minus),
            SusyStatus::UnbrokenPlus => Some(Sector::Plus),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SusyStatus::UnbrokenMinus => "unbroken-minus",
            SusyStatus::UnbrokenPlus => "unbroken-plus",
            SusyStatus::Broken => "broken",
            SusyStatus::Undetermined => "undetermined",
        }
    }
}

/// Bound states of one sector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub sector: Sector,
    pub eigenvalues: Vec<f64>,
    pub node_counts: Vec<usize>,
    pub threshold_flags: Vec<bool>,
    /// Asymptotic value of the potential; `None` for confining potentials.
    pub v_infinity: Option<f64>,
}

impl SpectrumReport {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn ground(&self) -> Option<f64> {
        self.eigenvalues.first().copied()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumOptions {
    /// Width of the threshold window above `V_infinity`.
    pub delta: f64,
    /// Overrides the automatic energy cut.
    pub e_max: Option<f64>,
}

impl SpectrumOptions {
    /// `delta = 0.02 * energy_scale`, automatic cut.
    pub fn for_energy_scale(energy_scale: f64) -> Self {
        Self {
            delta: 0.02 * energy_scale,
            e_max: None,
        }
    }
}

/// A potential counts as flat at the box edge when it changes by less than
/// this (relative) over the outer tenth of the box.
const PLATEAU_TOL: f64 = 1e-6;

/// Asymptotic value of an even potential sampled on a full grid, or `None`
/// if it is still rising at the walls.
pub fn plateau_value(v: &[f64], grid: &Grid) -> Option<f64> {
    let n = v.len();
    let edge = 0.5 * (v[0] + v[n - 1]);
    let inner_idx = grid.mid() + (0.9 * grid.mid() as f64).round() as usize;
    let inner = v[inner_idx.min(n - 1)];
    if (edge - inner).abs() <= PLATEAU_TOL * edge.abs().max(1.0) {
        Some(edge)
    } else {
        None
    }
}

/// Energy cut used when the caller does not supply one: `V_infinity + delta`
/// for potentials with a plateau, half the lower wall value otherwise.
pub fn default_e_max(v: &[f64], grid: &Grid, delta: f64) -> f64 {
    match plateau_value(v, grid) {
        Some(v_inf) => v_inf + delta,
        None => 0.5 * v[0].min(v[v.len() - 1]),
    }
}

/// Solves one sector and assembles its report.
///
/// Box states above `V_infinity` are discretized continuum. Of those, only
/// the lowest can stand for a threshold (half-bound) state: in a box of
/// half-width `L` a half-bound state sits near `(pi / 2L)^2` above the
/// continuum edge while the first genuine continuum state sits near
/// `(pi / L)^2`. It is kept, flagged, when it lies below `pi^2 / (2 L^2)`
/// and within `delta`.
pub fn solve_sector(
    v: &[f64],
    grid: &Grid,
    sector: Sector,
    opts: &SpectrumOptions,
) -> Result<SpectrumReport> {
    let ham = discretize(v, grid)?;
    let v_inf = plateau_value(v, grid);
    let e_max = opts.e_max.unwrap_or_else(|| default_e_max(v, grid, opts.delta));
    let energies = eigen_below(&ham, e_max)?;

    let mut report = SpectrumReport {
        sector,
        eigenvalues: Vec::new(),
        node_counts: Vec::new(),
        threshold_flags: Vec::new(),
        v_infinity: v_inf,
    };
    let l = grid.half_extent();
    let half_bound_window = std::f64::consts::PI.powi(2) / (2.0 * l * l);
    for e in energies {
        let threshold = match v_inf {
            Some(vi) if e >= vi => {
                let taken = report.threshold_flags.last() == Some(&true);
                if taken || e - vi > opts.delta.min(half_bound_window) {
                    break;
                }
                true
            }
            _ => false,
        };
        let psi = ham.eigenvector(e);
        report.eigenvalues.push(e);
        report.node_counts.push(node_count(&psi));
        report.threshold_flags.push(threshold);
    }
    Ok(report)
}

/// Result of applying a discrete Hamiltonian to a candidate zero mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroModeResidual {
    /// `||H psi|| / ||psi||`, in energy units.
    pub absolute: f64,
    /// `absolute / max |V|`.
    pub relative: f64,
}

/// `ln_psi` holds the log of the candidate at every grid node; it is
/// exponentiated after subtracting its maximum. Wall nodes are dropped.
pub fn zero_mode_residual(ham: &DiscreteHamiltonian, ln_psi: &[f64]) -> Result<ZeroModeResidual> {
    if ln_psi.len() != ham.dim() + 2 {
        return Err(Error::Usage(format!(
            "candidate has {} samples, expected {}",
            ln_psi.len(),
            ham.dim() + 2
        )));
    }
    let interior = &ln_psi[1..ln_psi.len() - 1];
    let top = interior.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !top.is_finite() {
        return Err(Error::Usage("zero-mode candidate vanishes identically".into()));
    }
    let psi: Vec<f64> = interior.iter().map(|l| (l - top).exp()).collect();
    let hpsi = ham.apply(&psi);
    let norm = |v: &[f64]| v.iter().map(|a| a * a).sum::<f64>().sqrt();
    let absolute = norm(&hpsi) / norm(&psi);
    let scale = ham.potential().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let scale = if scale > 0.0 { scale } else { 1.0 };
    Ok(ZeroModeResidual {
        absolute,
        relative: absolute / scale,
    })
}

/// Which sector, if any, carries a normalizable zero mode `y^(+-1/s)`,
/// judged from the asymptotic log-slopes `(+-1/s) u(L)`.
pub fn normalizability_sector(profile: &LogDerivProfile, s: f64, eps: f64) -> SusyStatus {
    let u_edge = profile.edge_value();
    let a_minus = u_edge / s;
    let a_plus = -u_edge / s;
    if a_minus.abs() < eps && a_plus.abs() < eps {
        return SusyStatus::Undetermined;
    }
    match (a_minus < -eps, a_plus < -eps) {
        (true, false) => SusyStatus::UnbrokenMinus,
        (false, true) => SusyStatus::UnbrokenPlus,
        _ => SusyStatus::Broken,
    }
}

/// `1e-6 * max(1, omega)`.
pub fn default_normalizability_eps(omega: f64) -> f64 {
    1e-6 * omega.max(1.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairingTolerances {
    /// Relative, scaled by `max(1, |E|)`.
    pub rel: f64,
    /// Used instead of `rel` when either state is threshold-flagged.
    pub threshold: f64,
    /// Absolute bound for calling a ground state a zero mode.
    pub zero: f64,
}

impl PairingTolerances {
    pub fn for_energy_scale(energy_scale: f64) -> Self {
        Self {
            rel: 1e-3,
            threshold: 5e-2,
            zero: 5e-3 * energy_scale,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairedLevel {
    pub e_minus: f64,
    pub e_plus: f64,
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnpairedState {
    pub sector: Sector,
    pub energy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairingReport {
    pub pairs: Vec<PairedLevel>,
    /// The zero mode in unbroken cases.
    pub unpaired: Option<UnpairedState>,
    pub status: SusyStatus,
    /// States with no partner beyond the zero mode.
    pub unmatched: Vec<UnpairedState>,
    /// Every gap within tolerance and nothing unmatched.
    pub consistent: bool,
}

/// Matches `E_plus[n]` with `E_minus[n + 1]` (unbroken-minus), the mirror
/// for unbroken-plus, or level by level when neither ground state is zero.
pub fn pair_spectra(
    minus: &SpectrumReport,
    plus: &SpectrumReport,
    tol: &PairingTolerances,
) -> PairingReport {
    let is_zero = |r: &SpectrumReport| r.ground().is_some_and(|e| e.abs() <= tol.zero);
    let status = match (is_zero(minus), is_zero(plus)) {
        (true, false) => SusyStatus::UnbrokenMinus,
        (false, true) => SusyStatus::UnbrokenPlus,
        (false, false) => SusyStatus::Broken,
        (true, true) => SusyStatus::Undetermined,
    };
    let (skip_minus, skip_plus) = match status {
        SusyStatus::UnbrokenMinus => (1, 0),
        SusyStatus::UnbrokenPlus => (0, 1),
        _ => (0, 0),
    };
    let unpaired = match status {
        SusyStatus::UnbrokenMinus => Some(UnpairedState {
            sector: Sector::Minus,
            energy: minus.eigenvalues[0],
        }),
        SusyStatus::UnbrokenPlus => Some(UnpairedState {
            sector: Sector::Plus,
            energy: plus.eigenvalues[0],
        }),
        _ => None,
    };

    let mut consistent = status != SusyStatus::Undetermined;
    let mut pairs = Vec::new();
    let mut unmatched = Vec::new();
    let mut i = skip_minus;
    let mut j = skip_plus;
    while i < minus.len() && j < plus.len() {
        let (em, ep) = (minus.eigenvalues[i], plus.eigenvalues[j]);
        let gap = (em - ep).abs();
        let threshold = minus.threshold_flags[i] || plus.threshold_flags[j];
        let rel = if threshold { tol.threshold } else { tol.rel };
        if gap > rel * em.abs().max(ep.abs()).max(1.0) {
            consistent = false;
        }
        pairs.push(PairedLevel {
            e_minus: em,
            e_plus: ep,
            gap,
        });
        i += 1;
        j += 1;
    }
    for (report, start) in [(minus, i), (plus, j)] {
        for &e in &report.eigenvalues[start.min(report.len())..] {
            unmatched.push(UnpairedState {
                sector: report.sector,
                energy: e,
            });
        }
    }
    if !unmatched.is_empty() {
        consistent = false;
    }
    PairingReport {
        pairs,
        unpaired,
        status,
        unmatched,
        consistent,
    }
}

/// Outcome of mapping an eigenstate through the intertwiner.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Intertwined {
    /// `||A psi||^2 / ||psi||^2` fell below the energy floor: `psi` was
    /// the zero mode.
    ZeroMode { norm_ratio: f64 },
    /// `||H' phi - E phi|| / ||phi||`.
    Residual(f64),
}

/// Maps an eigenvector `psi` (interior nodes) of one sector to the partner
/// sector with `A = d/dx + W` (minus to plus) or `A^+ = -d/dx + W` (plus to
/// minus), and measures how well the image satisfies the partner equation
/// at the same energy.
///
/// Intertwining is local, so the residual is the differential one at
/// interior nodes: the image is built on every node including the walls
/// (where `psi` vanishes but `psi'` does not) and the partner's second
/// difference uses those wall values instead of the Dirichlet zero.
pub fn susy_intertwine_check(
    w: &Superpotential,
    psi: &[f64],
    energy: f64,
    from: Sector,
    partner: &DiscreteHamiltonian,
    energy_floor: f64,
) -> Result<Intertwined> {
    let n = partner.dim();
    if psi.len() != n || w.w.len() != n + 2 {
        return Err(Error::Usage("eigenvector, superpotential and Hamiltonian disagree in size".into()));
    }
    let h = partner.step();
    let sign = match from {
        Sector::Minus => 1.0,
        Sector::Plus => -1.0,
    };
    // psi on the full grid, zero at the walls
    let mut full = Vec::with_capacity(n + 2);
    full.push(0.0);
    full.extend_from_slice(psi);
    full.push(0.0);
    let dpsi = crate::grid::central_diff(&full, h);
    let phi: Vec<f64> = (0..n + 2).map(|i| sign * dpsi[i] + w.w[i] * full[i]).collect();

    let norm = |v: &[f64]| v.iter().map(|a| a * a).sum::<f64>().sqrt();
    let phi_norm = norm(&phi[1..=n]);
    let ratio = (phi_norm / norm(psi)).powi(2);
    if ratio < energy_floor {
        return Ok(Intertwined::ZeroMode { norm_ratio: ratio });
    }
    let v = partner.potential();
    let resid: Vec<f64> = (1..=n)
        .map(|i| {
            let lap = (phi[i + 1] - 2.0 * phi[i] + phi[i - 1]) / (h * h);
            -lap + (v[i - 1] - energy) * phi[i]
        })
        .collect();
    Ok(Intertwined::Residual(norm(&resid) / phi_norm))
}

/// `floor(-1/s)`, robust to `-1/s` landing a rounding error below an integer.
pub fn max_level_index(s: f64) -> usize {
    (-1.0 / s + 1e-9).floor() as usize
}

/// Number of minus-sector states (threshold states included) equals
/// `floor(-1/s) + 1` for the constant kernel at negative `s`.
pub fn bound_state_count_check(s: f64, report: &SpectrumReport) -> bool {
    s < 0.0 && report.sector == Sector::Minus && report.len() == max_level_index(s) + 1
}
