//! End-to-end runs: kernel and coupling in, both spectra and their pairing
//! out.

use crate::error::Result;
use crate::grid::Grid;
use crate::kernel::Kernel;
use crate::sl_engine::{riccati_logderiv, LogDerivProfile};
use crate::spectral::{
    default_normalizability_eps, discretize, normalizability_sector, pair_spectra, solve_sector,
    susy_intertwine_check, DiscreteHamiltonian, Intertwined, PairingReport, PairingTolerances,
    Sector, SpectrumOptions, SpectrumReport, SusyStatus,
};
use crate::susy::{harmonic_sip_pair, partner_pair, superpotential, PotentialPair, Superpotential};

/// Default number of grid nodes for spectral work.
pub const DEFAULT_POINTS: usize = 8001;

/// Everything computed for one (kernel, s, grid).
#[derive(Debug, Clone)]
pub struct SpectralRun {
    pub grid: Grid,
    pub pair: PotentialPair,
    pub superpotential: Superpotential,
    pub minus: SpectrumReport,
    pub plus: SpectrumReport,
    pub pairing: PairingReport,
    /// Sector predicted from the asymptotic decay of `y^(+-1/s)`.
    pub normalizability: SusyStatus,
}

impl SpectralRun {
    pub fn sector(&self, sector: Sector) -> &SpectrumReport {
        match sector {
            Sector::Minus => &self.minus,
            Sector::Plus => &self.plus,
        }
    }

    pub fn hamiltonian(&self, sector: Sector) -> Result<DiscreteHamiltonian> {
        let v = match sector {
            Sector::Minus => &self.pair.v_minus,
            Sector::Plus => &self.pair.v_plus,
        };
        discretize(v, &self.grid)
    }

    /// Intertwining residual for the first excited state of the sector
    /// that carries the zero mode. `None` when supersymmetry is not
    /// unbroken or no excited state exists.
    pub fn first_excited_intertwine(&self) -> Result<Option<Intertwined>> {
        let Some(from) = self.pairing.status.zero_mode_sector() else {
            return Ok(None);
        };
        let report = self.sector(from);
        if report.len() < 2 {
            return Ok(None);
        }
        let e1 = report.eigenvalues[1];
        let source = self.hamiltonian(from)?;
        let target = self.hamiltonian(from.partner())?;
        let psi = source.eigenvector(e1);
        let floor = 0.1 * e1;
        susy_intertwine_check(&self.superpotential, &psi, e1, from, &target, floor).map(Some)
    }
}

/// Energy unit used for tolerances: `omega^2` of the kernel.
pub fn energy_scale(kernel: &Kernel) -> f64 {
    kernel.omega().powi(2)
}

/// Default grid: the kernel's default box at `DEFAULT_POINTS` nodes.
pub fn default_grid(kernel: &Kernel, s: f64) -> Result<Grid> {
    Grid::new(kernel.default_half_extent(s), DEFAULT_POINTS)
}

pub fn run_spectrum(
    kernel: &Kernel,
    s: f64,
    grid: &Grid,
    e_max: Option<f64>,
) -> Result<SpectralRun> {
    let profile = riccati_logderiv(kernel, s, grid)?;
    run_spectrum_from_profile(&profile, kernel, s, grid, e_max)
}

pub fn run_spectrum_from_profile(
    profile: &LogDerivProfile,
    kernel: &Kernel,
    s: f64,
    grid: &Grid,
    e_max: Option<f64>,
) -> Result<SpectralRun> {
    let scale = energy_scale(kernel);
    let pair = partner_pair(profile, kernel, s, grid)?;
    let w = superpotential(profile, s, grid)?;
    let mut opts = SpectrumOptions::for_energy_scale(scale);
    // Both sectors share one cut so their lists can be paired.
    opts.e_max = Some(e_max.unwrap_or_else(|| {
        let dm = crate::spectral::default_e_max(&pair.v_minus, grid, opts.delta);
        let dp = crate::spectral::default_e_max(&pair.v_plus, grid, opts.delta);
        dm.min(dp)
    }));
    let (minus, plus) = solve_both(&pair.v_minus, &pair.v_plus, grid, &opts)?;
    let pairing = pair_spectra(&minus, &plus, &PairingTolerances::for_energy_scale(scale));
    let normalizability =
        normalizability_sector(profile, s, default_normalizability_eps(kernel.omega()));
    Ok(SpectralRun {
        grid: *grid,
        pair,
        superpotential: w,
        minus,
        plus,
        pairing,
        normalizability,
    })
}

/// Solves the two sectors on separate threads.
fn solve_both(
    v_minus: &[f64],
    v_plus: &[f64],
    grid: &Grid,
    opts: &SpectrumOptions,
) -> Result<(SpectrumReport, SpectrumReport)> {
    std::thread::scope(|scope| {
        let plus = scope.spawn(|| solve_sector(v_plus, grid, Sector::Plus, opts));
        let minus = solve_sector(v_minus, grid, Sector::Minus, opts);
        let plus = plus.join().expect("plus-sector solve panicked");
        Ok((minus?, plus?))
    })
}

/// Calibration run on the oscillator factorization `W = omega x`.
pub fn run_sip_oscillator(omega: f64, grid: &Grid, e_max: f64) -> Result<SpectralRun> {
    let xs = grid.xs();
    let osc = harmonic_sip_pair(omega, &xs)?;
    let opts = SpectrumOptions {
        delta: 0.02 * omega,
        e_max: Some(e_max),
    };
    let (minus, plus) = solve_both(&osc.v_minus, &osc.v_plus, grid, &opts)?;
    let pairing = pair_spectra(&minus, &plus, &PairingTolerances::for_energy_scale(omega));
    Ok(SpectralRun {
        grid: *grid,
        pair: PotentialPair {
            s: f64::NAN,
            kernel: format!("sip-oscillator(omega={omega})"),
            x: xs,
            v_minus: osc.v_minus,
            v_plus: osc.v_plus,
            w: osc.w.clone(),
        },
        superpotential: Superpotential {
            s: f64::NAN,
            w: osc.w,
        },
        minus,
        plus,
        pairing,
        normalizability: SusyStatus::UnbrokenMinus,
    })
}
