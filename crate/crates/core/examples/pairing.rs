//! SUSY pairing of the two spectra, the zero mode, and the intertwiner
//! A = d/dx + W carrying an H- eigenstate to H+.
//!
//!     cargo run --release --example pairing

use susy_lab::analytic::ex1_zero_mode_ln;
use susy_lab::lab::{default_grid, run_spectrum};
use susy_lab::spectral::{discretize, zero_mode_residual, Sector};
use susy_lab::Kernel;

fn main() -> susy_lab::Result<()> {
    let (s, omega) = (-0.25, 2.0);
    let kernel = Kernel::constant(omega)?;
    let run = run_spectrum(&kernel, s, &default_grid(&kernel, s)?, None)?;
    let p = &run.pairing;
    println!("status {} (normalizability says {})", p.status.as_str(), run.normalizability.as_str());
    if let Some(z) = &p.unpaired {
        println!("zero mode in {:?}: E = {:.3e}", z.sector, z.energy);
    }
    for pair in &p.pairs {
        println!("E- = {:.6}  E+ = {:.6}  gap {:.2e}", pair.e_minus, pair.e_plus, pair.gap);
    }
    println!("consistent: {}", p.consistent);

    // cosh(s omega x)^(1/s) is annihilated by H- but not by H+
    let ln_psi: Vec<f64> = run.pair.x.iter().map(|&x| ex1_zero_mode_ln(s, omega, x)).collect();
    for sector in [Sector::Minus, Sector::Plus] {
        let h = discretize(
            if sector == Sector::Minus { &run.pair.v_minus } else { &run.pair.v_plus },
            &run.grid,
        )?;
        let r = zero_mode_residual(&h, &ln_psi)?;
        println!("||H psi0|| / ||psi0|| for {sector:?}: {:.3e}", r.absolute);
    }
    println!("intertwine, first excited state: {:?}", run.first_excited_intertwine()?);
    Ok(())
}
