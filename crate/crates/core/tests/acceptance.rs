//! Acceptance criteria 1 to 10. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails. Oracles (closed-form levels, series sums,
//! stencils) are written out here rather than taken from the library.

use std::io::Write;
use std::time::{Duration, Instant};

use susy_lab::coupling::s_from_g;
use susy_lab::lab::{run_sip_oscillator, run_spectrum, SpectralRun};
use susy_lab::sl_engine::{log_y_from_u, riccati_logderiv, series_coeff_c};
use susy_lab::spectral::{default_e_max, Intertwined};
use susy_lab::susy::{build_pair, harmonic_sip_pair};
use susy_lab::verify::oscillator_grid;
use susy_lab::{BFamily, Grid, Kernel};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

/// `-n s omega^2 (2 + n s)` for `n = 0..=floor(-1/s)`.
fn sip_levels(s: f64, omega: f64) -> Vec<f64> {
    let top = (-1.0 / s + 1e-9).floor() as usize;
    (0..=top)
        .map(|n| -(n as f64) * s * omega * omega * (2.0 + n as f64 * s))
        .collect()
}

fn ex1(s: f64, omega: f64) -> SpectralRun {
    let kernel = Kernel::constant(omega).unwrap();
    let grid = Grid::new(12.0 / (s.abs() * omega), 8001).unwrap();
    run_spectrum(&kernel, s, &grid, None).unwrap()
}

fn ex2() -> SpectralRun {
    let s = -1.0 / 3.0;
    let kernel = Kernel::harmonic(1.0).unwrap();
    let l = f64::max(8.0, 6.0 / f64::sqrt(1.0 / 3.0));
    run_spectrum(&kernel, s, &Grid::new(l, 8001).unwrap(), None).unwrap()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let kernel = Kernel::constant(2.0).unwrap();
    let run = run_spectrum(&kernel, -0.25, &Grid::new(24.0, 8001).unwrap(), None).unwrap();
    let elapsed = start.elapsed();
    let expected = [0.0, 1.75, 3.0, 3.75];
    let m = &run.minus;
    let p = &run.plus;
    let minus_ok = m.len() == 5
        && (0..4).all(|n| (m.eigenvalues[n] - expected[n]).abs() <= 5e-3 && !m.threshold_flags[n])
        && (m.eigenvalues[4] - 4.0).abs() <= 5e-2
        && m.threshold_flags[4];
    let plus_ok = p.len() == 4
        && (0..3).all(|n| (p.eigenvalues[n] - expected[n + 1]).abs() <= 5e-3)
        && (p.eigenvalues[3] - 4.0).abs() <= 5e-2
        && p.threshold_flags[3];
    let fast = elapsed < Duration::from_secs(10);
    outcome(
        minus_ok && plus_ok && fast,
        format!(
            "H- {:.5?} flags {:?}; H+ {:.5?}; {:.0?}",
            m.eigenvalues, m.threshold_flags, p.eigenvalues, elapsed
        ),
    )
}

fn criterion_2() -> Outcome {
    let mut worst = 0.0f64;
    let mut bad = Vec::new();
    for s in [-0.5, -1.0 / 3.0, -0.25, -0.2] {
        for omega in [1.0, 2.0] {
            let run = ex1(s, omega);
            let want = sip_levels(s, omega);
            let m = &run.minus;
            if m.len() != want.len() {
                bad.push(format!("s={s:.3} w={omega}: {} levels, want {}", m.len(), want.len()));
                continue;
            }
            // -1/s is an integer in every case, so the top level is the
            // threshold state
            if !m.threshold_flags[want.len() - 1] {
                bad.push(format!("s={s:.3} w={omega}: top level not flagged"));
            }
            for n in 0..m.len() {
                if m.threshold_flags[n] {
                    continue;
                }
                let err = (m.eigenvalues[n] - want[n]).abs() / (omega * omega);
                worst = worst.max(err);
                if err > 5e-3 {
                    bad.push(format!("s={s:.3} w={omega} n={n}: off by {err:.2e} omega^2"));
                }
            }
        }
    }
    outcome(
        bad.is_empty(),
        format!("max level error {worst:.2e} omega^2 (tol 5e-3); {bad:?}"),
    )
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let kernels = [
        Kernel::constant(2.0).unwrap(),
        Kernel::harmonic(1.0).unwrap(),
        Kernel::even_polynomial(vec![0.0, 0.0, 1.0]).unwrap(),
    ];
    let mut worst_ratio = 0.0f64;
    let mut pass = true;
    for kernel in &kernels {
        for s in [0.25, -0.25, 1.0 / 3.0, -1.0 / 3.0, 0.6, -0.6] {
            let grid = Grid::new(kernel.default_half_extent(s), 8001).unwrap();
            let at_s = build_pair(kernel, s, &grid).unwrap();
            let at_neg = build_pair(kernel, -s, &grid).unwrap();
            let mut diff = 0.0f64;
            let mut vmax = 0.0f64;
            for i in 0..grid.points() {
                diff = diff.max((at_neg.v_minus[i] - at_s.v_plus[i]).abs());
                vmax = vmax
                    .max(at_s.v_minus[i].abs())
                    .max(at_s.v_plus[i].abs());
            }
            let tol = 1e-9 * (1.0 + vmax);
            worst_ratio = worst_ratio.max(diff / tol);
            pass &= diff <= tol;
        }
    }
    let elapsed = start.elapsed();
    outcome(
        pass && elapsed < Duration::from_secs(2),
        format!("max residual/tolerance {worst_ratio:.2e}; {elapsed:.0?}"),
    )
}

/// `max |W' - s(W^2 - k)|` over interior nodes, `W'` by central differences.
fn riccati_residual(w: &[f64], xs: &[f64], kernel: &Kernel, s: f64, h: f64) -> f64 {
    (1..w.len() - 1)
        .map(|i| {
            let dw = (w[i + 1] - w[i - 1]) / (2.0 * h);
            (dw - s * (w[i] * w[i] - kernel.eval(xs[i]))).abs()
        })
        .fold(0.0, f64::max)
}

fn criterion_4() -> Outcome {
    let kernels = [
        Kernel::constant(2.0).unwrap(),
        Kernel::harmonic(1.0).unwrap(),
        Kernel::even_polynomial(vec![0.0, 0.0, 1.0]).unwrap(),
        Kernel::neg_constant(1.0).unwrap(),
    ];
    let mut over = Vec::new();
    let mut worst = 0.0f64;
    let mut min_ratio = f64::INFINITY;
    for kernel in &kernels {
        for s in [0.25, -0.25, 1.0 / 3.0, -1.0 / 3.0, 0.6, -0.6] {
            // the negated constant blows up at pi/(2|s| omega); stay at half of it
            let l = ((0.5 * kernel.admissible_half_extent(s)).min(4.0) * 1e3).floor() / 1e3;
            let resid = |h: f64| {
                let grid = Grid::with_step(l, h).unwrap();
                assert!((grid.step() - h).abs() < 1e-12 * h);
                let pair = build_pair(kernel, s, &grid).unwrap();
                riccati_residual(&pair.w, &pair.x, kernel, s, grid.step())
            };
            let (coarse, fine) = (resid(1e-3), resid(5e-4));
            worst = worst.max(coarse);
            min_ratio = min_ratio.min(coarse / fine);
            if coarse > 1e-6 {
                over.push(format!("{kernel} s={s:+.3}: {coarse:.3e}"));
            }
        }
    }
    // Same check on the exact W = -omega tanh(s omega x) sign(s): the
    // central-difference truncation alone.
    let (s, omega, h) = (0.6f64, 2.0, 1e-3);
    let xs: Vec<f64> = (0..=8000).map(|i| -4.0 + i as f64 * h).collect();
    let exact: Vec<f64> = xs
        .iter()
        .map(|&x| -(s.abs() * omega * (s.abs() * omega * x).tanh()) / s)
        .collect();
    let floor = riccati_residual(&exact, &xs, &Kernel::constant(omega).unwrap(), s, h);
    // x^4 has no closed form; solve at h/8 and sample every 8th node
    let quartic = Kernel::even_polynomial(vec![0.0, 0.0, 1.0]).unwrap();
    let fine = build_pair(&quartic, s, &Grid::with_step(4.0, h / 8.0).unwrap()).unwrap();
    let pick = |v: &[f64]| v.iter().step_by(8).copied().collect::<Vec<_>>();
    let quartic_floor = riccati_residual(&pick(&fine.w), &pick(&fine.x), &quartic, s, h);
    outcome(
        over.is_empty() && min_ratio >= 3.5,
        format!(
            "max residual {worst:.3e} (tol 1e-6), min h-halving ratio {min_ratio:.2} (>= 3.5); \
             over tolerance: {over:?}; same check on W exact (constant omega=2, s=0.6): {floor:.3e}, \
             on W solved at h/8 (x^4, s=0.6): {quartic_floor:.3e}"
        ),
    )
}

fn criterion_5() -> Outcome {
    let (s, omega) = (-0.25f64, 2.0);
    let grid = Grid::new(24.0, 8001).unwrap();
    let pair = build_pair(&Kernel::constant(omega).unwrap(), s, &grid).unwrap();
    let h = grid.step();
    // candidate cosh(s omega x)^(1/s), scaled to peak 1 at x = 0
    let psi: Vec<f64> = pair
        .x
        .iter()
        .map(|&x| ((s * omega * x).cosh().ln() / s).exp())
        .collect();
    // Dirichlet walls: drop the end nodes, treat outside as zero
    let apply = |v: &[f64]| -> (f64, f64) {
        let n = psi.len();
        let (mut num, mut den, mut vmax) = (0.0, 0.0, 0.0f64);
        for i in 1..n - 1 {
            let left = if i > 1 { psi[i - 1] } else { 0.0 };
            let right = if i < n - 2 { psi[i + 1] } else { 0.0 };
            let hp = -(left - 2.0 * psi[i] + right) / (h * h) + v[i] * psi[i];
            num += hp * hp;
            den += psi[i] * psi[i];
            vmax = vmax.max(v[i].abs());
        }
        let absolute = (num / den).sqrt();
        (absolute, absolute / vmax)
    };
    let (abs_m, rel_m) = apply(&pair.v_minus);
    let (abs_p, _) = apply(&pair.v_plus);
    outcome(
        rel_m <= 1e-4 && abs_p >= 0.1 * omega * omega,
        format!(
            "H- relative {rel_m:.3e} (tol 1e-4, absolute {abs_m:.3e}); H+ {abs_p:.3e} (>= {:.1})",
            0.1 * omega * omega
        ),
    )
}

fn criterion_6() -> Outcome {
    let run = ex2();
    let v = &run.pair.v_minus;
    let mid = (v.len() - 1) / 2;
    let minima: Vec<usize> = (1..v.len() - 1)
        .filter(|&i| v[i] < v[i - 1] && v[i] < v[i + 1])
        .collect();
    let zero_top = v[mid] == 0.0 && v[mid - 1] < 0.0 && v[mid + 1] < 0.0;
    let two_wells = minima.len() == 2
        && minima[0] + minima[1] == 2 * mid
        && minima.iter().all(|&i| v[i] < 0.0)
        && v[minima[0]] == v[minima[1]];
    let e0 = run.minus.eigenvalues[0];
    outcome(
        zero_top && two_wells && e0.abs() <= 5e-3,
        format!(
            "V-(0) = {}, minima at x = {:?} with V- = {:?}, E0 = {e0:.3e}",
            v[mid],
            minima.iter().map(|&i| run.pair.x[i]).collect::<Vec<_>>(),
            minima.iter().map(|&i| v[i]).collect::<Vec<_>>()
        ),
    )
}

/// `ln sum_p (s omega)^(2p) x^(4p) / prod_{j<=p} (4j-1)(4j)`.
fn ln_y_series(s: f64, omega: f64, x: f64) -> f64 {
    let z = (s * omega).powi(2) * x.powi(4);
    let (mut term, mut sum) = (1.0f64, 1.0f64);
    for j in 1..200 {
        let j = j as f64;
        term *= z / ((4.0 * j - 1.0) * (4.0 * j));
        sum += term;
        if term < 1e-18 * sum {
            break;
        }
    }
    sum.ln()
}

fn criterion_7() -> Outcome {
    let coeffs_ok = series_coeff_c(1).unwrap().as_f64() == 12.0
        && series_coeff_c(2).unwrap().as_f64() == 672.0;
    let mut worst = 0.0f64;
    for s in [0.1, -0.1, 0.5, -0.5, 0.9, -0.9] {
        for omega in [0.25, 1.0, 2.0] {
            let kernel = Kernel::harmonic(omega).unwrap();
            let grid = Grid::with_step(2.0, 1e-3).unwrap();
            let profile = riccati_logderiv(&kernel, s, &grid).unwrap();
            let ln_ode = log_y_from_u(&profile, &grid).unwrap();
            for (i, &x) in grid.half_xs().iter().enumerate() {
                worst = worst.max((ln_ode[i] - ln_y_series(s, omega, x)).abs());
            }
        }
    }
    outcome(
        coeffs_ok && worst <= 1e-9,
        format!("c1 = 12, c2 = 672: {coeffs_ok}; max |ln y_series - ln y_ode| = {worst:.3e} (tol 1e-9)"),
    )
}

fn criterion_8() -> Outcome {
    let mut runs: Vec<(String, f64, SpectralRun)> = Vec::new();
    for s in [-0.5, -1.0 / 3.0, -0.25, -0.2] {
        for omega in [1.0, 2.0] {
            runs.push((format!("ex1 s={s:.3} w={omega}"), omega, ex1(s, omega)));
        }
    }
    runs.push(("ex2".into(), 1.0, ex2()));
    let mut bad = Vec::new();
    let (mut worst_gap, mut worst_thr, mut worst_tw) = (0.0f64, 0.0f64, 0.0f64);
    for (name, omega, run) in &runs {
        let m = &run.minus;
        let p = &run.plus;
        for n in 0..m.len() {
            let e = m.eigenvalues[n];
            if n == 0 && e.abs() <= 5e-3 * omega * omega {
                continue; // the zero mode
            }
            let (k, partner) = p
                .eigenvalues
                .iter()
                .enumerate()
                .map(|(k, &q)| (k, q))
                .min_by(|a, b| (a.1 - e).abs().total_cmp(&(b.1 - e).abs()))
                .unwrap_or((0, f64::INFINITY));
            let rel = (partner - e).abs() / e.abs().max(1.0);
            let threshold = m.threshold_flags[n] || p.threshold_flags.get(k).copied().unwrap_or(false);
            if threshold {
                worst_thr = worst_thr.max(rel);
            } else {
                worst_gap = worst_gap.max(rel);
            }
            if rel > if threshold { 5e-2 } else { 1e-3 } {
                bad.push(format!("{name} n={n}: {rel:.2e}"));
            }
        }
        match run.first_excited_intertwine().unwrap() {
            Some(Intertwined::Residual(r)) => {
                worst_tw = worst_tw.max(r);
                if r > 1e-3 {
                    bad.push(format!("{name} intertwine {r:.2e}"));
                }
            }
            other => bad.push(format!("{name} intertwine {other:?}")),
        }
    }
    outcome(
        bad.is_empty(),
        format!(
            "{} cases; max rel gap {worst_gap:.2e} (1e-3), threshold {worst_thr:.2e} (5e-2), \
             intertwine {worst_tw:.2e} (1e-3); {bad:?}",
            runs.len()
        ),
    )
}

fn criterion_9() -> Outcome {
    let gs: Vec<f64> = (0..121).map(|i| 10f64.powf(-3.0 + 6.0 * i as f64 / 120.0)).collect();
    let mut s_worst = 0.0f64;
    let mut b_worst = 0.0f64;
    for &g in &gs {
        s_worst = s_worst.max((s_from_g(1.0 / g).unwrap() + s_from_g(g).unwrap()).abs());
        for fam in BFamily::builtin() {
            let b = fam.eval(g).unwrap();
            let r = (fam.eval(1.0 / g).unwrap() + b).abs() / (1e-12 * (1.0 + b.abs()));
            b_worst = b_worst.max(r);
        }
    }
    outcome(
        s_worst <= 1e-14 && b_worst <= 1.0,
        format!("max |s(1/g)+s(g)| = {s_worst:.2e} (1e-14); max b residual/tolerance = {b_worst:.2e}"),
    )
}

fn criterion_10() -> Outcome {
    let omega = 1.0;
    let grid = oscillator_grid(omega).unwrap();
    let osc = harmonic_sip_pair(omega, &grid.xs()).unwrap();
    let e_max = default_e_max(&osc.v_minus, &grid, 0.02 * omega);
    let run = run_sip_oscillator(omega, &grid, e_max).unwrap();
    let got = &run.minus.eigenvalues;
    let worst = (0..5)
        .map(|n| (got.get(n).copied().unwrap_or(f64::INFINITY) - 2.0 * n as f64).abs())
        .fold(0.0, f64::max);
    outcome(
        worst <= 5e-4,
        format!("first five {:.6?}, max error {worst:.2e} (5e-4)", &got[..5.min(got.len())]),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("example 1 spectrum", criterion_1),
        ("SIP formula and counts", criterion_2),
        ("duality identity", criterion_3),
        ("Riccati residual", criterion_4),
        ("zero mode", criterion_5),
        ("example 2 double well", criterion_6),
        ("series/ODE cross-oracle", criterion_7),
        ("isospectral pairing", criterion_8),
        ("coupling layer", criterion_9),
        ("oscillator calibration", criterion_10),
    ];
    let mut stdout = std::io::stdout().lock();
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let o = f();
        if !o.pass {
            failed += 1;
        }
        let _ = writeln!(
            stdout,
            "criterion {:>2} {:<24} {}  {}",
            i + 1,
            name,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    let _ = writeln!(stdout, "{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
