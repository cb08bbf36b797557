//! Bound-state count against floor(-1/s) + 1 across couplings.
//!
//!     cargo run --release --example sweep

use susy_lab::lab::{default_grid, run_spectrum};
use susy_lab::spectral::max_level_index;
use susy_lab::Kernel;

fn main() -> susy_lab::Result<()> {
    let kernel = Kernel::constant(1.0)?;
    println!("{:>7} {:>15} {:>6} {:>9} {:>10}", "s", "status", "count", "expected", "threshold");
    for i in 1..=16 {
        let s = -0.9 + 0.05 * i as f64;
        let run = run_spectrum(&kernel, s, &default_grid(&kernel, s)?, None)?;
        let report = &run.minus;
        println!(
            "{s:>7.3} {:>15} {:>6} {:>9} {:>10}",
            run.pairing.status.as_str(),
            report.len(),
            max_level_index(s) + 1,
            report.threshold_flags.iter().any(|&f| f)
        );
    }
    Ok(())
}
