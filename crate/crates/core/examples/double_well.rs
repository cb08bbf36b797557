//! Harmonic kernel at s = -1/3, omega = 1: V_- is a symmetric double well
//! with V_-(0) = 0 on top of the barrier, and its ground state sits at zero.
//!
//!     cargo run --release --example double_well

use susy_lab::analytic::ex2_potentials;
use susy_lab::lab::{default_grid, run_spectrum};
use susy_lab::verify::local_minima;
use susy_lab::Kernel;

fn main() -> susy_lab::Result<()> {
    let (s, omega) = (-1.0 / 3.0, 1.0);
    let kernel = Kernel::harmonic(omega)?;
    let run = run_spectrum(&kernel, s, &default_grid(&kernel, s)?, None)?;
    let v = &run.pair.v_minus;
    let mid = run.grid.mid();
    println!("V-(0) = {}", v[mid]);
    for i in local_minima(v) {
        println!("minimum at x = {:+.4}: V- = {:.6}", run.pair.x[i], v[i]);
    }
    println!("\n{:>5} {:>12} {:>12}", "x", "V- (grid)", "V- (closed)");
    for x in [0.0, 0.5, 1.0, 1.5, 2.0, 3.0] {
        let i = mid + (x / run.grid.step()).round() as usize;
        let (vm, _) = ex2_potentials(s, omega, run.pair.x[i])?;
        println!("{:>5.2} {:>12.8} {:>12.8}", run.pair.x[i], v[i], vm);
    }
    println!("\nlowest levels  H-: {:?}", &run.minus.eigenvalues[..4]);
    println!("               H+: {:?}", &run.plus.eigenvalues[..3]);
    println!("status {}, pairing consistent: {}", run.pairing.status.as_str(), run.pairing.consistent);
    Ok(())
}
