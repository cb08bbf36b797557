//! Closed forms for the constant kernel (hyperbolic and trigonometric) and
//! the harmonic kernel. These serve as oracles for the numeric pipeline.

use crate::error::{Error, Result};
use crate::sl_engine::harmonic_logderiv;
use crate::spectral::max_level_index;

/// Partner potentials `(V_minus, V_plus)` at one point.
pub type PotentialValues = (f64, f64);

/// Constant kernel `k = omega^2`: even solution `cosh(s omega x)`,
///
/// `V_minus = omega^2 (s + (1 - s) tanh^2(s omega x))`,
/// `V_plus  = omega^2 (-s + (1 + s) tanh^2(s omega x))`.
pub fn ex1_potentials(s: f64, omega: f64, x: f64) -> PotentialValues {
    let t2 = (s * omega * x).tanh().powi(2);
    let w2 = omega * omega;
    (w2 * (s + (1.0 - s) * t2), w2 * (-s + (1.0 + s) * t2))
}

/// `ln cosh(a)` without overflow.
pub fn ln_cosh(a: f64) -> f64 {
    let a = a.abs();
    a + (-2.0 * a).exp().ln_1p() - std::f64::consts::LN_2
}

/// `ln` of the constant-kernel zero-mode candidate `cosh(s omega x)^(1/s)`.
pub fn ex1_zero_mode_ln(s: f64, omega: f64, x: f64) -> f64 {
    ln_cosh(s * omega * x) / s
}

/// Shape-invariant spectrum of the constant-kernel minus sector at `s < 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct SipSpectrum {
    pub s: f64,
    pub omega: f64,
    /// `E_n = -n s omega^2 (2 + n s)`, `n = 0..=floor(-1/s)`.
    pub levels: Vec<f64>,
}

impl SipSpectrum {
    /// Index of the level sitting exactly at `omega^2`, when `-1/s` is an
    /// integer.
    pub fn threshold_index(&self) -> Option<usize> {
        let n = max_level_index(self.s);
        let e = -(n as f64) * self.s * (2.0 + n as f64 * self.s);
        ((e - 1.0).abs() < 1e-9).then_some(n)
    }
}

pub fn ex1_sip_spectrum(s: f64, omega: f64) -> Result<SipSpectrum> {
    if !(s < 0.0) || !s.is_finite() {
        return Err(Error::Domain(format!(
            "the shape-invariant spectrum is derived for s < 0, got {s}"
        )));
    }
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::Domain(format!("omega must be positive, got {omega}")));
    }
    let w2 = omega * omega;
    let levels = (0..=max_level_index(s))
        .map(|n| {
            let n = n as f64;
            -n * s * w2 * (2.0 + n * s)
        })
        .collect();
    Ok(SipSpectrum { s, omega, levels })
}

/// Kernel `k = -omega^2`: even solution `cos(s omega x)`, valid for
/// `|s omega x| < pi/2`.
///
/// `V_minus = -s omega^2 + (1 - s) omega^2 tan^2(s omega x)`,
/// `V_plus  = +s omega^2 + (1 + s) omega^2 tan^2(s omega x)`.
pub fn ex1_trig_potentials(s: f64, omega: f64, x: f64) -> Result<PotentialValues> {
    let arg = s * omega * x;
    if arg.abs() >= std::f64::consts::FRAC_PI_2 {
        return Err(Error::Domain(format!(
            "trigonometric partners need |s omega x| < pi/2, got {arg}"
        )));
    }
    let t2 = arg.tan().powi(2);
    let w2 = omega * omega;
    Ok((-s * w2 + (1.0 - s) * w2 * t2, s * w2 + (1.0 + s) * w2 * t2))
}

/// Harmonic kernel `k = omega^2 x^2`:
/// `V_-+ = +-s omega^2 x^2 + (1 -+ s) (u/s)^2` with `u` the log-derivative of
/// the power-series solution, `u = |s| omega x R`, `R = I_{3/4}/I_{-1/4}`.
pub fn ex2_potentials(s: f64, omega: f64, x: f64) -> Result<PotentialValues> {
    if s == 0.0 {
        return Err(Error::DegenerateCoupling);
    }
    let u = harmonic_logderiv(s, omega, x)?;
    let q = (u / s) * (u / s);
    let k = omega * omega * x * x;
    Ok((s * k + (1.0 - s) * q, -s * k + (1.0 + s) * q))
}

/// The minus-sector ground state energy at `s < 0`: zero, by unbroken
/// supersymmetry.
pub fn ex2_ground_state_energy(s: f64, omega: f64) -> Result<f64> {
    if !(s < 0.0) {
        return Err(Error::Domain(format!("expected s < 0, got {s}")));
    }
    if !(omega > 0.0) {
        return Err(Error::Domain(format!("omega must be positive, got {omega}")));
    }
    Ok(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ex1_center_and_asymptote() {
        for &(s, omega) in &[(-0.25, 2.0), (0.6, 1.0)] {
            let (vm, vp) = ex1_potentials(s, omega, 0.0);
            assert_eq!((vm, vp), (s * omega * omega, -s * omega * omega));
            let (vm, vp) = ex1_potentials(s, omega, 1e3);
            assert!((vm - omega * omega).abs() < 1e-12);
            assert!((vp - omega * omega).abs() < 1e-12);
        }
    }

    #[test]
    fn ex1_duality_in_closed_form() {
        for i in 0..100 {
            let x = -5.0 + 0.1 * i as f64;
            for &s in &[0.25, 1.0 / 3.0, 0.6] {
                let (vm_neg, vp_neg) = ex1_potentials(-s, 2.0, x);
                let (vm, vp) = ex1_potentials(s, 2.0, x);
                assert!((vm_neg - vp).abs() <= 1e-14 * (1.0 + vp.abs()));
                assert!((vp_neg - vm).abs() <= 1e-14 * (1.0 + vm.abs()));
            }
        }
    }

    #[test]
    fn sip_levels_quarter() {
        let sp = ex1_sip_spectrum(-0.25, 2.0).unwrap();
        let expected = [0.0, 7.0 / 16.0, 12.0 / 16.0, 15.0 / 16.0, 1.0].map(|f| f * 4.0);
        assert_eq!(sp.levels.len(), 5);
        for (a, b) in sp.levels.iter().zip(expected) {
            assert!((a - b).abs() < 1e-14);
        }
        assert_eq!(sp.threshold_index(), Some(4));
    }

    #[test]
    fn sip_levels_half_and_one() {
        let sp = ex1_sip_spectrum(-0.5, 1.0).unwrap();
        assert_eq!(sp.levels, vec![0.0, 0.75, 1.0]);
        let sp = ex1_sip_spectrum(-1.0, 3.0).unwrap();
        assert_eq!(sp.levels, vec![0.0, 9.0]);
        assert!(ex1_sip_spectrum(0.25, 1.0).is_err());
        assert!(ex1_sip_spectrum(0.0, 1.0).is_err());
        assert_eq!(ex1_sip_spectrum(-0.3, 1.0).unwrap().threshold_index(), None);
    }

    #[test]
    fn sip_levels_increase_and_stay_below_threshold() {
        for &s in &[-0.2, -0.3, -1.0 / 3.0, -0.7] {
            let sp = ex1_sip_spectrum(s, 1.5).unwrap();
            assert_eq!(sp.levels[0], 0.0);
            assert!(sp.levels.windows(2).all(|w| w[1] > w[0]));
            assert!(sp.levels.iter().all(|&e| e <= 2.25 + 1e-12));
        }
    }

    #[test]
    fn trig_partners() {
        let (vm, vp) = ex1_trig_potentials(0.5, 1.0, 0.0).unwrap();
        assert_eq!((vm, vp), (-0.5, 0.5));
        for i in 0..20 {
            let x = -1.9 + 0.2 * i as f64;
            let (vm_neg, _) = ex1_trig_potentials(-0.5, 1.0, x).unwrap();
            let (_, vp) = ex1_trig_potentials(0.5, 1.0, x).unwrap();
            assert!((vm_neg - vp).abs() <= 1e-14 * (1.0 + vp.abs()));
        }
        assert!(ex1_trig_potentials(0.5, 1.0, 3.2).is_err());
    }

    #[test]
    fn ex2_center_and_far_field() {
        assert_eq!(ex2_potentials(-1.0 / 3.0, 1.0, 0.0).unwrap(), (0.0, 0.0));
        // far out R -> 1, both potentials approach omega^2 x^2
        let x = 60.0;
        let (vm, vp) = ex2_potentials(-1.0 / 3.0, 1.0, x).unwrap();
        assert!((vm / (x * x) - 1.0).abs() < 2e-3);
        assert!((vp / (x * x) - 1.0).abs() < 2e-3);
    }

    #[test]
    fn ex2_double_well_shape() {
        let s = -1.0 / 3.0;
        let xs: Vec<f64> = (0..=400).map(|i| i as f64 * 0.01).collect();
        let vm: Vec<f64> = xs.iter().map(|&x| ex2_potentials(s, 1.0, x).unwrap().0).collect();
        assert!(vm[1] < 0.0);
        let imin = (1..vm.len() - 1).find(|&i| vm[i] < vm[i - 1] && vm[i] <= vm[i + 1]).unwrap();
        assert!(vm[imin] < 0.0);
        assert!(vm[imin + 1..].windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn ln_cosh_is_stable() {
        assert!((ln_cosh(0.5) - 0.5f64.cosh().ln()).abs() < 1e-15);
        assert!((ln_cosh(800.0) - (800.0 - std::f64::consts::LN_2)).abs() < 1e-12);
        assert_eq!(ln_cosh(0.0), 0.0);
    }

    #[test]
    fn ground_state_energy_is_zero() {
        assert_eq!(ex2_ground_state_energy(-1.0 / 3.0, 1.0).unwrap(), 0.0);
        assert!(ex2_ground_state_energy(0.2, 1.0).is_err());
    }
}
