//! Named invariant checks, each producing rows of (case, residual,
//! tolerance). `verify --all` runs every check on its built-in test matrix;
//! a kernel or coupling given on the command line narrows the matrix.

use std::fmt::Write as _;

use crate::analytic::{ex1_potentials, ex1_sip_spectrum, ex1_zero_mode_ln, ex2_potentials};
use crate::coupling::{antisymmetry_report, log_grid, s_from_g, BFamily};
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::kernel::Kernel;
use crate::lab::{default_grid, run_sip_oscillator, run_spectrum, SpectralRun, DEFAULT_POINTS};
use crate::sl_engine::{harmonic_series, log_y_from_u, riccati_logderiv, series_coeff_c};
use crate::spectral::{discretize, zero_mode_residual, Intertwined, Sector};
use crate::susy::{duality_residual_with, identity_residuals, partner_pair, PartnerBuilder};

pub const CHECKS: [&str; 13] = [
    "coupling",
    "riccati",
    "duality",
    "factorization",
    "series",
    "closed-form",
    "zero-mode",
    "sip-spectrum",
    "ex2",
    "pairing",
    "intertwine",
    "nodes",
    "calibration",
];

/// Couplings used by the duality, Riccati and factorization checks.
pub const S_SET: [f64; 6] = [0.25, -0.25, 1.0 / 3.0, -1.0 / 3.0, 0.6, -0.6];

/// `(s, omega)` cases of the SIP spectrum checks.
pub const SIP_CASES: [(f64, f64); 8] = [
    (-0.5, 1.0),
    (-0.5, 2.0),
    (-1.0 / 3.0, 1.0),
    (-1.0 / 3.0, 2.0),
    (-0.25, 1.0),
    (-0.25, 2.0),
    (-0.2, 1.0),
    (-0.2, 2.0),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bound {
    AtMost,
    AtLeast,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckRow {
    pub check: &'static str,
    pub case: String,
    pub residual: f64,
    pub tolerance: f64,
    pub bound: Bound,
}

impl CheckRow {
    fn at_most(check: &'static str, case: String, residual: f64, tolerance: f64) -> Self {
        Self {
            check,
            case,
            residual,
            tolerance,
            bound: Bound::AtMost,
        }
    }

    fn at_least(check: &'static str, case: String, residual: f64, tolerance: f64) -> Self {
        Self {
            check,
            case,
            residual,
            tolerance,
            bound: Bound::AtLeast,
        }
    }

    pub fn passed(&self) -> bool {
        match self.bound {
            Bound::AtMost => self.residual <= self.tolerance,
            Bound::AtLeast => self.residual >= self.tolerance,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct VerifyReport {
    pub rows: Vec<CheckRow>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.rows.iter().all(CheckRow::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRow> {
        self.rows.iter().filter(|r| !r.passed())
    }

    /// Fixed-width text table, one row per case.
    pub fn table(&self) -> String {
        let cw = self.rows.iter().map(|r| r.case.len()).max().unwrap_or(4).max(4);
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<14} {:<cw$} {:>12}    {:>10}  result",
            "check", "case", "residual", "tolerance"
        );
        for r in &self.rows {
            let op = match r.bound {
                Bound::AtMost => "<=",
                Bound::AtLeast => ">=",
            };
            let _ = writeln!(
                out,
                "{:<14} {:<cw$} {:>12.3e} {op} {:>10.3e}  {}",
                r.check,
                r.case,
                r.residual,
                r.tolerance,
                if r.passed() { "pass" } else { "FAIL" }
            );
        }
        let failed = self.failures().count();
        let _ = writeln!(
            out,
            "{} of {} rows passed",
            self.rows.len() - failed,
            self.rows.len()
        );
        out
    }
}

/// What the checks run on.
#[derive(Debug, Clone)]
pub struct VerifyContext {
    /// Replaces the kernel matrix of kernel-generic checks.
    pub kernel: Option<Kernel>,
    /// Replaces the coupling set of coupling-generic checks.
    pub s: Option<f64>,
    /// Constructs partner potentials from a profile. Swappable so a test
    /// harness can inject a broken construction.
    pub builder: PartnerBuilder,
}

impl Default for VerifyContext {
    fn default() -> Self {
        Self {
            kernel: None,
            s: None,
            builder: partner_pair,
        }
    }
}

impl VerifyContext {
    fn kernels(&self) -> Vec<Kernel> {
        match &self.kernel {
            Some(k) => vec![k.clone()],
            None => builtin_kernels(),
        }
    }

    fn couplings(&self) -> Vec<f64> {
        match self.s {
            Some(s) => vec![s],
            None => S_SET.to_vec(),
        }
    }
}

/// Constant `omega = 2`, harmonic `omega = 1`, `x^4`, negated constant
/// `omega = 1`.
pub fn builtin_kernels() -> Vec<Kernel> {
    vec![
        Kernel::ConstantSquare { omega: 2.0 },
        Kernel::HarmonicSquare { omega: 1.0 },
        Kernel::EvenPolynomial(vec![0.0, 0.0, 1.0]),
        Kernel::NegConstantSquare { omega: 1.0 },
    ]
}

/// Half-width of the window used for pointwise identity checks: 4, or half
/// the admissible extent for kernels whose solution blows up, rounded down
/// to a multiple of 1e-3 so that steps of 1e-3 and 5e-4 fit exactly.
pub fn identity_window(kernel: &Kernel, s: f64) -> f64 {
    let l = (0.5 * kernel.admissible_half_extent(s)).min(4.0);
    (l * 1e3).floor() / 1e3
}

/// Runs the named checks in order.
pub fn run(names: &[&str], ctx: &VerifyContext) -> Result<VerifyReport> {
    let mut report = VerifyReport::default();
    for name in names {
        let rows = match *name {
            "coupling" => check_coupling()?,
            "riccati" => check_riccati(ctx)?,
            "duality" => check_duality(ctx)?,
            "factorization" => check_factorization(ctx)?,
            "series" => check_series()?,
            "closed-form" => check_closed_form()?,
            "zero-mode" => check_zero_mode()?,
            "sip-spectrum" => check_sip_spectrum()?,
            "ex2" => check_ex2()?,
            "pairing" => check_pairing()?,
            "intertwine" => check_intertwine()?,
            "nodes" => check_nodes()?,
            "calibration" => check_calibration()?,
            other => {
                return Err(Error::Usage(format!(
                    "unknown check `{other}`; valid checks: {}",
                    CHECKS.join(", ")
                )))
            }
        };
        report.rows.extend(rows);
    }
    Ok(report)
}

pub fn run_all(ctx: &VerifyContext) -> Result<VerifyReport> {
    run(&CHECKS, ctx)
}

fn case(kernel: &Kernel, s: f64) -> String {
    format!("{kernel} s={s:+.4}")
}

fn check_coupling() -> Result<Vec<CheckRow>> {
    let gs = log_grid(1e-3, 1e3, 121);
    let mut rows = Vec::new();
    let mut worst = 0.0f64;
    for &g in &gs {
        worst = worst.max((s_from_g(1.0 / g)? + s_from_g(g)?).abs());
    }
    rows.push(CheckRow::at_most("coupling", "s(1/g)+s(g)".into(), worst, 1e-14));
    for fam in BFamily::builtin() {
        let r = antisymmetry_report(&fam, &gs)?;
        rows.push(CheckRow::at_most(
            "coupling",
            format!("b(1/g)+b(g) {}", fam.name()),
            r.max_residual,
            1e-12 * (1.0 + r.max_abs_b),
        ));
    }
    Ok(rows)
}

/// Max `|W' - s(W^2 - k)|` over interior nodes with a central-difference
/// `W'`, on `[-l, l]` at step `h`.
pub fn riccati_w_residual(kernel: &Kernel, s: f64, l: f64, h: f64) -> Result<f64> {
    let grid = Grid::with_step(l, h)?;
    let pair = partner_pair(&riccati_logderiv(kernel, s, &grid)?, kernel, s, &grid)?;
    Ok(identity_residuals(&pair, kernel, &grid).riccati)
}

fn check_riccati(ctx: &VerifyContext) -> Result<Vec<CheckRow>> {
    let mut rows = Vec::new();
    for kernel in ctx.kernels() {
        for s in ctx.couplings() {
            let l = identity_window(&kernel, s);
            let coarse = riccati_w_residual(&kernel, s, l, 1e-3)?;
            let fine = riccati_w_residual(&kernel, s, l, 5e-4)?;
            rows.push(CheckRow::at_least(
                "riccati",
                format!("{} order", case(&kernel, s)),
                coarse / fine,
                3.5,
            ));
            let grid = Grid::with_step(l, 1e-3)?;
            let a = riccati_logderiv(&kernel, s, &grid)?;
            let b = riccati_logderiv(&kernel, -s, &grid)?;
            let even = a
                .half()
                .iter()
                .zip(b.half())
                .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
            rows.push(CheckRow::at_most(
                "riccati",
                format!("{} u(s)-u(-s)", case(&kernel, s)),
                even,
                0.0,
            ));
        }
    }
    // closed form u = s omega tanh(s omega x) for the constant kernel
    for omega in [1.0, 2.0] {
        for s in [0.25f64, -1.0 / 3.0, 0.6] {
            let kernel = Kernel::ConstantSquare { omega };
            let grid = Grid::with_step(10.0 / (s.abs() * omega), 1e-3)?;
            let p = riccati_logderiv(&kernel, s, &grid)?;
            let err = grid
                .half_xs()
                .iter()
                .zip(p.half())
                .fold(0.0f64, |m, (&x, &u)| {
                    let exact = s.abs() * omega * (s.abs() * omega * x).tanh();
                    m.max((u - exact).abs())
                });
            rows.push(CheckRow::at_most(
                "riccati",
                format!("{} tanh", case(&kernel, s)),
                err,
                1e-8,
            ));
        }
    }
    Ok(rows)
}

fn check_duality(ctx: &VerifyContext) -> Result<Vec<CheckRow>> {
    let kernels = match &ctx.kernel {
        Some(k) => vec![k.clone()],
        // the negated constant is excluded: its box depends on s
        None => builtin_kernels().into_iter().take(3).collect(),
    };
    let mut rows = Vec::new();
    for kernel in kernels {
        for s in ctx.couplings() {
            let l = kernel
                .default_half_extent(s)
                .min(kernel.default_half_extent(-s));
            let grid = Grid::new(l, 4001)?;
            let r = duality_residual_with(ctx.builder, &kernel, s, &grid)?;
            rows.push(CheckRow::at_most(
                "duality",
                case(&kernel, s),
                r.max_abs,
                1e-9 * (1.0 + r.scale),
            ));
        }
    }
    Ok(rows)
}

fn check_factorization(ctx: &VerifyContext) -> Result<Vec<CheckRow>> {
    let mut rows = Vec::new();
    for kernel in ctx.kernels() {
        for s in ctx.couplings() {
            let l = identity_window(&kernel, s);
            let resid = |h: f64| -> Result<_> {
                let grid = Grid::with_step(l, h)?;
                let pair = (ctx.builder)(&riccati_logderiv(&kernel, s, &grid)?, &kernel, s, &grid)?;
                Ok((identity_residuals(&pair, &kernel, &grid), pair.max_abs()))
            };
            let (coarse, scale) = resid(1e-3)?;
            let (fine, _) = resid(5e-4)?;
            rows.push(CheckRow::at_least(
                "factorization",
                format!("{} V- order", case(&kernel, s)),
                coarse.factor_minus / fine.factor_minus,
                3.5,
            ));
            rows.push(CheckRow::at_least(
                "factorization",
                format!("{} V+ order", case(&kernel, s)),
                coarse.factor_plus / fine.factor_plus,
                3.5,
            ));
            rows.push(CheckRow::at_most(
                "factorization",
                format!("{} V+ - V-", case(&kernel, s)),
                coarse.difference,
                1e-12 * (1.0 + scale),
            ));
        }
    }
    Ok(rows)
}

/// Max `|ln y_series - ln y_ode|` on `|x| <= 2` for the harmonic kernel
/// (both are even, so `0 <= x <= 2` suffices).
pub fn series_ode_gap(s: f64, omega: f64) -> Result<f64> {
    let kernel = Kernel::HarmonicSquare { omega };
    let grid = Grid::with_step(2.0, 1e-3)?;
    let profile = riccati_logderiv(&kernel, s, &grid)?;
    let ln_ode = log_y_from_u(&profile, &grid)?;
    let mut worst = 0.0f64;
    for (i, &x) in grid.half_xs().iter().enumerate() {
        let series = harmonic_series(s, omega, x, 1e-17)?;
        worst = worst.max((series.ln_y - ln_ode[i]).abs());
    }
    Ok(worst)
}

fn check_series() -> Result<Vec<CheckRow>> {
    let mut rows = Vec::new();
    for (p, want) in [(1u32, 12.0), (2, 672.0), (3, 88704.0)] {
        rows.push(CheckRow::at_most(
            "series",
            format!("c_{p}"),
            (series_coeff_c(p)?.as_f64() - want).abs(),
            0.0,
        ));
    }
    for s in [0.1, -0.5, 0.9, -0.9] {
        for omega in [0.5, 1.0, 2.0] {
            rows.push(CheckRow::at_most(
                "series",
                format!("harmonic(omega={omega}) s={s:+.4}"),
                series_ode_gap(s, omega)?,
                1e-9,
            ));
        }
    }
    Ok(rows)
}

fn check_closed_form() -> Result<Vec<CheckRow>> {
    let mut rows = Vec::new();
    for omega in [1.0, 2.0] {
        for s in S_SET {
            let kernel = Kernel::ConstantSquare { omega };
            let grid = Grid::with_step(kernel.default_half_extent(s), 1e-3)?;
            let pair = partner_pair(&riccati_logderiv(&kernel, s, &grid)?, &kernel, s, &grid)?;
            let mut err = 0.0f64;
            for (i, &x) in pair.x.iter().enumerate() {
                let (vm, vp) = ex1_potentials(s, omega, x);
                err = err
                    .max((pair.v_minus[i] - vm).abs())
                    .max((pair.v_plus[i] - vp).abs());
            }
            rows.push(CheckRow::at_most("closed-form", case(&kernel, s), err, 1e-8));
        }
    }
    // the closed forms themselves swap under s -> -s
    let xs: Vec<f64> = (0..=40).map(|i| -4.0 + 0.2 * i as f64).collect();
    for s in [0.25, 1.0 / 3.0, 0.6] {
        let mut e1 = 0.0f64;
        let mut e2 = 0.0f64;
        for &x in &xs {
            let (a_m, a_p) = ex1_potentials(s, 2.0, x);
            let (b_m, b_p) = ex1_potentials(-s, 2.0, x);
            e1 = e1.max((a_m - b_p).abs()).max((a_p - b_m).abs());
            let (c_m, c_p) = ex2_potentials(s, 1.0, x)?;
            let (d_m, d_p) = ex2_potentials(-s, 1.0, x)?;
            e2 = e2.max((c_m - d_p).abs()).max((c_p - d_m).abs());
        }
        rows.push(CheckRow::at_most("closed-form", format!("ex1 swap s={s:.4}"), e1, 1e-14));
        rows.push(CheckRow::at_most("closed-form", format!("ex2 swap s={s:.4}"), e2, 1e-14));
    }
    Ok(rows)
}

fn check_zero_mode() -> Result<Vec<CheckRow>> {
    let (s, omega) = (-0.25, 2.0);
    let kernel = Kernel::ConstantSquare { omega };
    let grid = default_grid(&kernel, s)?;
    let pair = partner_pair(&riccati_logderiv(&kernel, s, &grid)?, &kernel, s, &grid)?;
    let ln_psi: Vec<f64> = pair.x.iter().map(|&x| ex1_zero_mode_ln(s, omega, x)).collect();
    let minus = zero_mode_residual(&discretize(&pair.v_minus, &grid)?, &ln_psi)?;
    let plus = zero_mode_residual(&discretize(&pair.v_plus, &grid)?, &ln_psi)?;
    let c = case(&kernel, s);
    Ok(vec![
        CheckRow::at_most("zero-mode", format!("{c} H-"), minus.relative, 1e-4),
        CheckRow::at_least("zero-mode", format!("{c} H+"), plus.absolute, 0.1 * omega * omega),
    ])
}

fn ex1_run(s: f64, omega: f64) -> Result<SpectralRun> {
    let kernel = Kernel::ConstantSquare { omega };
    run_spectrum(&kernel, s, &default_grid(&kernel, s)?, None)
}

fn ex2_run() -> Result<SpectralRun> {
    let kernel = Kernel::HarmonicSquare { omega: 1.0 };
    let s = -1.0 / 3.0;
    run_spectrum(&kernel, s, &default_grid(&kernel, s)?, None)
}

fn check_sip_spectrum() -> Result<Vec<CheckRow>> {
    let mut rows = Vec::new();
    for (s, omega) in SIP_CASES {
        let run = ex1_run(s, omega)?;
        let sip = ex1_sip_spectrum(s, omega)?;
        let c = format!("constant(omega={omega}) s={s:+.4}");
        let mut worst = 0.0f64;
        for (n, &e) in run.minus.eigenvalues.iter().enumerate() {
            if run.minus.threshold_flags[n] {
                continue;
            }
            let want = sip.levels.get(n).copied().unwrap_or(f64::NAN);
            worst = worst.max((e - want).abs());
        }
        let worst = if worst.is_nan() { f64::INFINITY } else { worst };
        rows.push(CheckRow::at_most("sip-spectrum", format!("{c} levels"), worst, 5e-3 * omega * omega));
        let expected = sip.levels.len() as f64;
        rows.push(CheckRow::at_most(
            "sip-spectrum",
            format!("{c} count"),
            (run.minus.len() as f64 - expected).abs(),
            0.0,
        ));
    }
    Ok(rows)
}

/// Strict local minima of `v` on interior nodes.
pub fn local_minima(v: &[f64]) -> Vec<usize> {
    (1..v.len() - 1)
        .filter(|&i| v[i] < v[i - 1] && v[i] < v[i + 1])
        .collect()
}

fn check_ex2() -> Result<Vec<CheckRow>> {
    let run = ex2_run()?;
    let v = &run.pair.v_minus;
    let mid = run.grid.mid();
    let minima = local_minima(v);
    let symmetric = minima.len() == 2 && minima[0] + minima[1] == 2 * mid && v[minima[0]] < 0.0;
    let strict_max = v[mid] > v[mid - 1] && v[mid] > v[mid + 1];
    Ok(vec![
        CheckRow::at_most("ex2", "V-(0)".into(), v[mid].abs(), 1e-12),
        CheckRow::at_most("ex2", "V-(0) strict max".into(), if strict_max { 0.0 } else { 1.0 }, 0.0),
        CheckRow::at_most(
            "ex2",
            format!("negative symmetric minima ({} found)", minima.len()),
            if symmetric { 0.0 } else { 1.0 },
            0.0,
        ),
        CheckRow::at_most(
            "ex2",
            "ground energy".into(),
            run.minus.ground().map_or(f64::INFINITY, f64::abs),
            5e-3,
        ),
    ])
}

/// Unbroken cases: every SIP case and Example 2.
fn unbroken_runs() -> Result<Vec<(String, SpectralRun)>> {
    let mut out = Vec::new();
    for (s, omega) in SIP_CASES {
        out.push((format!("constant(omega={omega}) s={s:+.4}"), ex1_run(s, omega)?));
    }
    out.push(("harmonic(omega=1) s=-0.3333".into(), ex2_run()?));
    Ok(out)
}

/// Largest relative gap among ordinary and among threshold pairs.
pub fn pairing_gaps(run: &SpectralRun) -> (f64, f64) {
    let mut ordinary = 0.0f64;
    let mut threshold = 0.0f64;
    let skip_m = usize::from(run.pairing.status.zero_mode_sector() == Some(Sector::Minus));
    let skip_p = usize::from(run.pairing.status.zero_mode_sector() == Some(Sector::Plus));
    for (k, p) in run.pairing.pairs.iter().enumerate() {
        let rel = p.gap / p.e_minus.abs().max(p.e_plus.abs()).max(1.0);
        let flagged =
            run.minus.threshold_flags[k + skip_m] || run.plus.threshold_flags[k + skip_p];
        if flagged {
            threshold = threshold.max(rel);
        } else {
            ordinary = ordinary.max(rel);
        }
    }
    (ordinary, threshold)
}

fn check_pairing() -> Result<Vec<CheckRow>> {
    let mut rows = Vec::new();
    for (c, run) in unbroken_runs()? {
        let (ordinary, threshold) = pairing_gaps(&run);
        rows.push(CheckRow::at_most("pairing", format!("{c} rel gap"), ordinary, 1e-3));
        rows.push(CheckRow::at_most("pairing", format!("{c} threshold gap"), threshold, 5e-2));
        rows.push(CheckRow::at_most(
            "pairing",
            format!("{c} unmatched"),
            run.pairing.unmatched.len() as f64,
            0.0,
        ));
        let agree = run.pairing.status == run.normalizability && run.pairing.status.zero_mode_sector().is_some();
        rows.push(CheckRow::at_most(
            "pairing",
            format!("{c} status {}", run.pairing.status.as_str()),
            if agree { 0.0 } else { 1.0 },
            0.0,
        ));
    }
    Ok(rows)
}

fn check_intertwine() -> Result<Vec<CheckRow>> {
    let mut rows = Vec::new();
    for (c, run) in unbroken_runs()? {
        let r = match run.first_excited_intertwine()? {
            Some(Intertwined::Residual(r)) => r,
            _ => f64::INFINITY,
        };
        rows.push(CheckRow::at_most("intertwine", c, r, 1e-3));
    }
    Ok(rows)
}

fn check_nodes() -> Result<Vec<CheckRow>> {
    let mut rows = Vec::new();
    for (c, run) in unbroken_runs()? {
        for report in [&run.minus, &run.plus] {
            let bad = report
                .node_counts
                .iter()
                .enumerate()
                .filter(|(n, &k)| *n != k)
                .count();
            rows.push(CheckRow::at_most(
                "nodes",
                format!("{c} H{}", if report.sector == Sector::Minus { "-" } else { "+" }),
                bad as f64,
                0.0,
            ));
        }
    }
    Ok(rows)
}

/// Grid used for the oscillator calibration when none is given.
pub fn oscillator_grid(omega: f64) -> Result<Grid> {
    Grid::new((6.0 / omega.sqrt()).max(8.0), DEFAULT_POINTS)
}

fn check_calibration() -> Result<Vec<CheckRow>> {
    let omega = 1.0;
    let run = run_sip_oscillator(omega, &oscillator_grid(omega)?, 9.0 * omega)?;
    let mut worst = 0.0f64;
    for n in 0..5 {
        let e = run.minus.eigenvalues.get(n).copied().unwrap_or(f64::INFINITY);
        worst = worst.max((e - 2.0 * n as f64 * omega).abs());
    }
    Ok(vec![CheckRow::at_most(
        "calibration",
        "sip-oscillator(omega=1) first five".into(),
        worst,
        5e-4,
    )])
}
