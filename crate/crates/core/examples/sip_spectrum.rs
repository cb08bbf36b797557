//! Constant kernel: numeric spectra of both partners against the
//! shape-invariant levels E_n = -n s omega^2 (2 + n s).
//!
//!     cargo run --release --example sip_spectrum

use susy_lab::analytic::ex1_sip_spectrum;
use susy_lab::lab::{default_grid, run_spectrum};
use susy_lab::Kernel;

fn main() -> susy_lab::Result<()> {
    for (s, omega) in [(-0.25, 2.0), (-0.5, 1.0), (-0.3, 1.0), (-0.2, 2.0)] {
        let kernel = Kernel::constant(omega)?;
        let run = run_spectrum(&kernel, s, &default_grid(&kernel, s)?, None)?;
        let sip = ex1_sip_spectrum(s, omega)?;
        println!("s = {s}, omega = {omega}, L = {}: {}", run.grid.half_extent(), run.pairing.status.as_str());
        println!("  {:>2} {:>14} {:>14} {:>14}", "n", "E- numeric", "E_n formula", "E+ numeric");
        for (n, &e) in run.minus.eigenvalues.iter().enumerate() {
            let formula = sip.levels.get(n).map_or("-".to_string(), |v| format!("{v:.6}"));
            let plus = n
                .checked_sub(1)
                .and_then(|m| run.plus.eigenvalues.get(m))
                .map_or("-".to_string(), |v| format!("{v:.6}"));
            let flag = if run.minus.threshold_flags[n] { "  threshold" } else { "" };
            println!("  {n:>2} {e:>14.6} {formula:>14} {plus:>14}{flag}");
        }
    }
    Ok(())
}
