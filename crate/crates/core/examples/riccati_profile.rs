//! Log-derivative profiles u = y'/y from the Riccati solver, against the
//! closed form (constant kernel) and the power series (harmonic kernel).
//!
//!     cargo run --example riccati_profile

use susy_lab::sl_engine::{harmonic_series, log_y_from_u, riccati_logderiv};
use susy_lab::{Grid, Kernel};

fn main() -> susy_lab::Result<()> {
    let (s, omega) = (-0.25, 2.0);
    let grid = Grid::with_step(10.0, 1e-3)?;
    let kernel = Kernel::constant(omega)?;
    let profile = riccati_logderiv(&kernel, s, &grid)?;
    println!("constant kernel, s = {s}, omega = {omega}");
    println!("{:>6} {:>20} {:>12}", "x", "u", "u - exact");
    for (i, (&x, &u)) in grid.half_xs().iter().zip(profile.half()).enumerate() {
        if i % 2000 == 0 {
            let exact = s.abs() * omega * (s.abs() * omega * x).tanh();
            println!("{x:>6.2} {u:>20.15} {:>12.2e}", u - exact);
        }
    }
    // the profile depends on s^2 only
    let dual = riccati_logderiv(&kernel, -s, &grid)?;
    println!("profiles at +-s identical: {}", dual.half() == profile.half());

    let s = -1.0 / 3.0;
    let kernel = Kernel::harmonic(1.0)?;
    let grid = Grid::with_step(2.0, 1e-3)?;
    let profile = riccati_logderiv(&kernel, s, &grid)?;
    let ln_y = log_y_from_u(&profile, &grid)?;
    println!("\nharmonic kernel, s = {s:.4}: ln y from the ODE vs the series");
    for (i, &x) in grid.half_xs().iter().enumerate().step_by(500) {
        let series = harmonic_series(s, 1.0, x, 1e-17)?;
        println!("x = {x:.1}  ln y = {:.15}  diff {:.1e}  ({} terms)", ln_y[i], ln_y[i] - series.ln_y, series.terms);
    }
    Ok(())
}
