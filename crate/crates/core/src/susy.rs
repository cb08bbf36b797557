//! Superpotential and partner potentials built from a log-derivative
//! profile, plus the duality and factorization checks on them.
//!
//! With `W = -u/s` the Riccati equation reads `W' = s (W^2 - k)` and the
//! partners are
//!
//! ```text
//! V_minus = W^2 - W' = +s k + (1 - s) (u/s)^2
//! V_plus  = W^2 + W' = -s k + (1 + s) (u/s)^2
//! ```
//!
//! Because `u` depends on `s` only through `s^2`, flipping the sign of `s`
//! swaps the two partners exactly.

use crate::coupling::CouplingParam;
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::kernel::Kernel;
use crate::sl_engine::{riccati_logderiv, LogDerivProfile};

/// `W = -u/s` on the full grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Superpotential {
    pub s: f64,
    pub w: Vec<f64>,
}

pub fn superpotential(profile: &LogDerivProfile, s: f64, grid: &Grid) -> Result<Superpotential> {
    check_profile_coupling(profile, s)?;
    let w = profile.full(grid)?.into_iter().map(|u| -u / s).collect();
    Ok(Superpotential { s, w })
}

fn check_profile_coupling(profile: &LogDerivProfile, s: f64) -> Result<()> {
    if s == 0.0 {
        return Err(Error::DegenerateCoupling);
    }
    if profile.s().abs() != s.abs() {
        return Err(Error::Usage(format!(
            "profile was solved at |s| = {}, requested |s| = {}",
            profile.s().abs(),
            s.abs()
        )));
    }
    Ok(())
}

/// Both partner potentials and the superpotential on a full grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialPair {
    pub s: f64,
    pub kernel: String,
    pub x: Vec<f64>,
    pub v_minus: Vec<f64>,
    pub v_plus: Vec<f64>,
    pub w: Vec<f64>,
}

impl PotentialPair {
    pub fn max_abs(&self) -> f64 {
        self.v_minus
            .iter()
            .chain(&self.v_plus)
            .fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Signature of a partner-potential constructor; lets verification swap in
/// a deliberately broken builder as a negative control.
pub type PartnerBuilder = fn(&LogDerivProfile, &Kernel, f64, &Grid) -> Result<PotentialPair>;

pub fn partner_pair(
    profile: &LogDerivProfile,
    kernel: &Kernel,
    s: f64,
    grid: &Grid,
) -> Result<PotentialPair> {
    check_profile_coupling(profile, s)?;
    profile.check_grid(grid)?;
    let half_x = grid.half_xs();
    let (mut vm, mut vp) = (Vec::with_capacity(half_x.len()), Vec::with_capacity(half_x.len()));
    for (&x, &u) in half_x.iter().zip(profile.half()) {
        let k = kernel.eval(x);
        let q = (u / s) * (u / s);
        vm.push(s * k + (1.0 - s) * q);
        vp.push(-s * k + (1.0 + s) * q);
    }
    Ok(PotentialPair {
        s,
        kernel: kernel.label(),
        x: grid.xs(),
        v_minus: grid.even_extension(&vm),
        v_plus: grid.even_extension(&vp),
        w: superpotential(profile, s, grid)?.w,
    })
}

/// Solves the profile and builds the pair in one step.
pub fn build_pair(kernel: &Kernel, s: f64, grid: &Grid) -> Result<PotentialPair> {
    let profile = riccati_logderiv(kernel, s, grid)?;
    partner_pair(&profile, kernel, s, grid)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualityResidual {
    /// `max_x |V_minus(x, -s) - V_plus(x, s)|`
    pub max_abs: f64,
    /// `max |V|` over both pairs, for the relative bound.
    pub scale: f64,
}

impl DualityResidual {
    /// The contract `max_abs <= 1e-9 (1 + scale)`.
    pub fn within_contract(&self) -> bool {
        self.max_abs <= 1e-9 * (1.0 + self.scale)
    }
}

/// Compares `V_minus(-s)` against `V_plus(s)` (and the mirrored identity)
/// from two independent profile solves.
pub fn duality_residual(kernel: &Kernel, s: f64, grid: &Grid) -> Result<DualityResidual> {
    duality_residual_with(partner_pair, kernel, s, grid)
}

pub fn duality_residual_with(
    builder: PartnerBuilder,
    kernel: &Kernel,
    s: f64,
    grid: &Grid,
) -> Result<DualityResidual> {
    let pos = builder(&riccati_logderiv(kernel, s, grid)?, kernel, s, grid)?;
    let neg = builder(&riccati_logderiv(kernel, -s, grid)?, kernel, -s, grid)?;
    let mut max_abs = 0.0f64;
    for i in 0..pos.x.len() {
        max_abs = max_abs
            .max((neg.v_minus[i] - pos.v_plus[i]).abs())
            .max((neg.v_plus[i] - pos.v_minus[i]).abs());
    }
    Ok(DualityResidual {
        max_abs,
        scale: pos.max_abs().max(neg.max_abs()),
    })
}

/// `max |W(x, 1/g) + W(x, g)|`.
pub fn susy_w_condition(w_at_g: &[f64], w_at_inv_g: &[f64]) -> Result<f64> {
    if w_at_g.len() != w_at_inv_g.len() {
        return Err(Error::Usage(format!(
            "superpotentials sampled on different grids ({} vs {} nodes)",
            w_at_g.len(),
            w_at_inv_g.len()
        )));
    }
    Ok(w_at_g
        .iter()
        .zip(w_at_inv_g)
        .map(|(a, b)| (a + b).abs())
        .fold(0.0, f64::max))
}

/// Discretization residuals of the identities the pair must satisfy,
/// all measured at interior nodes with central-difference `W'`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityResiduals {
    /// `max |V_minus - (W^2 - W')|`
    pub factor_minus: f64,
    /// `max |V_plus - (W^2 + W')|`
    pub factor_plus: f64,
    /// `max |W' - s (W^2 - k)|`
    pub riccati: f64,
    /// `max |(V_plus - V_minus) - 2 s ((u/s)^2 - k)|` with `u/s = -W`.
    pub difference: f64,
}

pub fn identity_residuals(pair: &PotentialPair, kernel: &Kernel, grid: &Grid) -> IdentityResiduals {
    let h = grid.step();
    let s = pair.s;
    let w = &pair.w;
    let mut r = IdentityResiduals {
        factor_minus: 0.0,
        factor_plus: 0.0,
        riccati: 0.0,
        difference: 0.0,
    };
    for i in 1..w.len() - 1 {
        let dw = (w[i + 1] - w[i - 1]) / (2.0 * h);
        let w2 = w[i] * w[i];
        let k = kernel.eval(pair.x[i]);
        r.factor_minus = r.factor_minus.max((pair.v_minus[i] - (w2 - dw)).abs());
        r.factor_plus = r.factor_plus.max((pair.v_plus[i] - (w2 + dw)).abs());
        r.riccati = r.riccati.max((dw - s * (w2 - k)).abs());
        let diff = pair.v_plus[i] - pair.v_minus[i];
        r.difference = r.difference.max((diff - 2.0 * s * (w2 - k)).abs());
    }
    r
}

/// Closed-form inverse-square family `W = -1/(s (a + x))`.
///
/// Singular on the line `x = -a`; never handed to the spectral solver.
#[derive(Debug, Clone, PartialEq)]
pub struct InverseSquareFamily {
    pub s: f64,
    pub w: Vec<f64>,
    pub v_minus: Vec<f64>,
    pub v_plus: Vec<f64>,
    pub singular_on_line: bool,
}

pub fn inverse_square_family(a: f64, g: f64, xs: &[f64]) -> Result<InverseSquareFamily> {
    let s = CouplingParam::from_g(g)?.require_nondegenerate()?;
    inverse_square_family_at_s(a, s, xs)
}

pub fn inverse_square_family_at_s(a: f64, s: f64, xs: &[f64]) -> Result<InverseSquareFamily> {
    if s == 0.0 {
        return Err(Error::DegenerateCoupling);
    }
    let mut fam = InverseSquareFamily {
        s,
        w: Vec::with_capacity(xs.len()),
        v_minus: Vec::with_capacity(xs.len()),
        v_plus: Vec::with_capacity(xs.len()),
        singular_on_line: true,
    };
    for &x in xs {
        let d = a + x;
        if d == 0.0 {
            return Err(Error::Singularity { x });
        }
        let inv = 1.0 / (s * s * d * d);
        fam.w.push(-1.0 / (s * d));
        fam.v_minus.push((1.0 - s) * inv);
        fam.v_plus.push((1.0 + s) * inv);
    }
    Ok(fam)
}

/// Oscillator factorization `W = omega x`, `V_minus = omega^2 x^2 - omega`,
/// `V_plus = omega^2 x^2 + omega`. Used to calibrate the eigensolver.
#[derive(Debug, Clone, PartialEq)]
pub struct SipOscillator {
    pub w: Vec<f64>,
    pub v_minus: Vec<f64>,
    pub v_plus: Vec<f64>,
}

pub fn harmonic_sip_pair(omega: f64, xs: &[f64]) -> Result<SipOscillator> {
    if !(omega.is_finite() && omega > 0.0) {
        return Err(Error::Domain(format!("omega must be positive, got {omega}")));
    }
    Ok(SipOscillator {
        w: xs.iter().map(|x| omega * x).collect(),
        v_minus: xs.iter().map(|x| omega * omega * x * x - omega).collect(),
        v_plus: xs.iter().map(|x| omega * omega * x * x + omega).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn constant_pair(omega: f64, s: f64) -> (Grid, PotentialPair) {
        let k = Kernel::constant(omega).unwrap();
        let grid = Grid::new(k.default_half_extent(s), 4001).unwrap();
        let pair = build_pair(&k, s, &grid).unwrap();
        (grid, pair)
    }

    #[test]
    fn superpotential_of_constant_kernel_is_tanh() {
        let (omega, s) = (2.0, -0.25);
        let k = Kernel::constant(omega).unwrap();
        let grid = Grid::with_step(k.default_half_extent(s), 1e-3).unwrap();
        let p = riccati_logderiv(&k, s, &grid).unwrap();
        let w = superpotential(&p, s, &grid).unwrap();
        assert_eq!(w.w[grid.mid()], 0.0);
        for (i, x) in grid.xs().iter().enumerate() {
            let exact = -omega * (s * omega * x).tanh();
            assert!((w.w[i] - exact).abs() < 1e-8 / s.abs());
        }
        // far right tends to -omega sign(s)
        assert!((w.w[grid.points() - 1] - omega).abs() < 1e-8);
        let flipped = superpotential(&p, -s, &grid).unwrap();
        for (a, b) in w.w.iter().zip(&flipped.w) {
            assert_eq!(*a, -*b);
        }
    }

    #[test]
    fn superpotential_rejects_mismatched_s() {
        let grid = Grid::new(1.0, 101).unwrap();
        let p = riccati_logderiv(&Kernel::constant(1.0).unwrap(), 0.5, &grid).unwrap();
        assert!(superpotential(&p, 0.0, &grid).is_err());
        assert!(superpotential(&p, 0.4, &grid).is_err());
        assert!(superpotential(&p, -0.5, &grid).is_ok());
    }

    #[test]
    fn constant_pair_center_and_asymptotes() {
        let (omega, s) = (2.0, -0.25);
        let (grid, pair) = constant_pair(omega, s);
        let m = grid.mid();
        assert_eq!(pair.v_minus[m], s * omega * omega);
        assert_eq!(pair.v_plus[m], -s * omega * omega);
        assert!((pair.v_minus[0] - omega * omega).abs() < 1e-8);
        assert!((pair.v_plus[grid.points() - 1] - omega * omega).abs() < 1e-8);
    }

    #[test]
    fn harmonic_pair_vanishes_at_origin() {
        let k = Kernel::harmonic(1.0).unwrap();
        let grid = Grid::new(4.0, 801).unwrap();
        let pair = build_pair(&k, -1.0 / 3.0, &grid).unwrap();
        assert_eq!(pair.v_minus[grid.mid()], 0.0);
        assert_eq!(pair.v_plus[grid.mid()], 0.0);
    }

    #[test]
    fn pair_is_even() {
        let k = Kernel::even_polynomial(vec![0.5, 0.0, 1.0]).unwrap();
        let grid = Grid::new(3.0, 601).unwrap();
        let pair = build_pair(&k, 0.4, &grid).unwrap();
        let n = grid.points();
        for i in 0..n {
            assert_eq!(pair.v_minus[i], pair.v_minus[n - 1 - i]);
            assert_eq!(pair.v_plus[i], pair.v_plus[n - 1 - i]);
            assert_eq!(pair.w[i], -pair.w[n - 1 - i]);
        }
    }

    #[test]
    fn duality_is_exact_for_builtin_kernels() {
        let kernels = [
            Kernel::constant(2.0).unwrap(),
            Kernel::harmonic(1.0).unwrap(),
            Kernel::even_polynomial(vec![0.0, 0.0, 1.0]).unwrap(),
        ];
        for k in &kernels {
            for &s in &[-0.25, 1.0 / 3.0, 0.5] {
                let grid = Grid::new(k.default_half_extent(s), 2001).unwrap();
                let r = duality_residual(k, s, &grid).unwrap();
                assert!(r.within_contract(), "{k} s={s}: {r:?}");
            }
        }
    }

    #[test]
    fn sign_error_breaks_duality() {
        fn wrong(p: &LogDerivProfile, k: &Kernel, s: f64, g: &Grid) -> Result<PotentialPair> {
            let mut pair = partner_pair(p, k, s, g)?;
            for (i, x) in pair.x.iter().enumerate() {
                pair.v_plus[i] += 2.0 * s * k.eval(*x);
            }
            Ok(pair)
        }
        let k = Kernel::constant(2.0).unwrap();
        let grid = Grid::new(12.0, 1001).unwrap();
        let r = duality_residual_with(wrong, &k, 0.5, &grid).unwrap();
        assert!(!r.within_contract());
    }

    #[test]
    fn w_condition_at_dual_couplings() {
        let k = Kernel::constant(1.0).unwrap();
        let c = CouplingParam::from_g(2.0).unwrap();
        let d = c.dual();
        let grid = Grid::new(20.0, 4001).unwrap();
        let wg = superpotential(&riccati_logderiv(&k, c.s(), &grid).unwrap(), c.s(), &grid).unwrap();
        let wd = superpotential(&riccati_logderiv(&k, d.s(), &grid).unwrap(), d.s(), &grid).unwrap();
        assert!(susy_w_condition(&wg.w, &wd.w).unwrap() <= 1e-12);
        assert!(susy_w_condition(&wg.w, &wd.w[1..]).is_err());
    }

    #[test]
    fn w_condition_separable_and_negative_control() {
        use crate::coupling::BFamily;
        let xs: Vec<f64> = (0..41).map(|i| -2.0 + 0.1 * i as f64).collect();
        let a: Vec<f64> = xs.iter().map(|x| x.sin()).collect();
        let max_a = a.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let g = 2.5;
        let b = |g: f64| BFamily::Ratio.eval(g).unwrap();
        let w1: Vec<f64> = a.iter().map(|ai| ai * b(g)).collect();
        let w2: Vec<f64> = a.iter().map(|ai| ai * b(1.0 / g)).collect();
        assert!(susy_w_condition(&w1, &w2).unwrap() <= 1e-15);
        // b(g) = g is not antisymmetric
        let w1: Vec<f64> = a.iter().map(|ai| ai * g).collect();
        let w2: Vec<f64> = a.iter().map(|ai| ai / g).collect();
        let r = susy_w_condition(&w1, &w2).unwrap();
        assert!((r - (g + 1.0 / g) * max_a).abs() < 1e-14);
    }

    #[test]
    fn inverse_square_closed_forms() {
        let xs = [0.5, 1.0, 2.0, 3.5];
        let a = 0.75;
        let fam = inverse_square_family(a, 3.0, &xs).unwrap();
        let dual = inverse_square_family(a, 1.0 / 3.0, &xs).unwrap();
        assert!(fam.singular_on_line);
        for i in 0..xs.len() {
            assert!((dual.v_minus[i] - fam.v_plus[i]).abs() <= 1e-14 * fam.v_plus[i]);
            assert!((dual.v_plus[i] - fam.v_minus[i]).abs() <= 1e-14 * fam.v_plus[i]);
        }
        // g -> 0 drives s -> 1: V_minus -> 0, V_plus -> 2/(a+x)^2
        let lim = inverse_square_family(a, 1e-9, &xs).unwrap();
        for (i, x) in xs.iter().enumerate() {
            assert!(lim.v_minus[i].abs() < 1e-15);
            assert!((lim.v_plus[i] - 2.0 / (a + x).powi(2)).abs() < 1e-12);
        }
        assert!(matches!(
            inverse_square_family(a, 2.0, &[-a]),
            Err(Error::Singularity { .. })
        ));
        assert!(matches!(inverse_square_family(a, 1.0, &xs), Err(Error::DegenerateCoupling)));
    }

    #[test]
    fn inverse_square_depends_on_s_only() {
        let xs = [0.1, 0.7, 1.3];
        let s = crate::coupling::s_from_g(1.7).unwrap();
        let via_g = inverse_square_family(0.2, 1.7, &xs).unwrap();
        let via_s = inverse_square_family_at_s(0.2, s, &xs).unwrap();
        assert_eq!(via_g, via_s);
    }

    #[test]
    fn sip_oscillator_pair() {
        let xs = [-1.0, 0.0, 0.5, 2.0];
        let p = harmonic_sip_pair(1.5, &xs).unwrap();
        assert_eq!((p.w[1], p.v_minus[1], p.v_plus[1]), (0.0, -1.5, 1.5));
        for i in 0..xs.len() {
            assert!((p.v_plus[i] - p.v_minus[i] - 3.0).abs() < 1e-14);
        }
        assert!(harmonic_sip_pair(0.0, &xs).is_err());
    }

    #[test]
    fn identities_converge_at_second_order() {
        let k = Kernel::harmonic(1.0).unwrap();
        let res = |n: usize| {
            let grid = Grid::new(4.0, n).unwrap();
            let pair = build_pair(&k, -0.6, &grid).unwrap();
            identity_residuals(&pair, &k, &grid)
        };
        let (a, b) = (res(2001), res(4001));
        for (ra, rb) in [
            (a.factor_minus, b.factor_minus),
            (a.factor_plus, b.factor_plus),
            (a.riccati, b.riccati),
        ] {
            assert!(ra / rb > 3.5, "{ra} {rb}");
        }
        assert!(a.difference < 1e-10);
    }
}
