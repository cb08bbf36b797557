//! Oscillator factorization W = omega x: the eigensolver should return
//! 0, 2 omega, 4 omega, ... for H- and the same list without 0 for H+.
//!
//!     cargo run --release --example calibration

use susy_lab::lab::run_sip_oscillator;
use susy_lab::verify::oscillator_grid;

fn main() -> susy_lab::Result<()> {
    for omega in [0.5, 1.0, 2.0] {
        let run = run_sip_oscillator(omega, &oscillator_grid(omega)?, 9.0 * omega)?;
        let err = run
            .minus
            .eigenvalues
            .iter()
            .enumerate()
            .map(|(n, e)| (e - 2.0 * n as f64 * omega).abs())
            .fold(0.0, f64::max);
        println!("omega = {omega}: H- {:?}", run.minus.eigenvalues);
        println!("            max error {err:.2e}, nodes {:?}", run.minus.node_counts);
    }
    Ok(())
}
