//! The coupling map s(g), its inverse, and the antisymmetric functions b(g).
//!
//!     cargo run --example coupling_maps

use susy_lab::coupling::{antisymmetry_report, g_from_s, log_grid, s_from_g};
use susy_lab::{BFamily, CouplingParam};

fn main() -> susy_lab::Result<()> {
    println!("{:>8} {:>10} {:>10} {:>12}", "g", "s(g)", "s(1/g)", "g(s(g))");
    for g in [0.1, 0.5, 1.0, 2.0, 10.0] {
        let s = s_from_g(g)?;
        println!("{g:>8} {s:>10.6} {:>10.6} {:>12.9}", s_from_g(1.0 / g)?, g_from_s(s)?);
    }

    let p = CouplingParam::from_g(2.0)?;
    println!("\ng = {}  s = {}  dual: g = {}  s = {}", p.g(), p.s(), p.dual().g(), p.dual().s());

    // B(t) = sinh(t) gives b(g) = (g - 1/g)/2
    let sinh = BFamily::log_odd(f64::sinh)?;
    let gs = log_grid(1e-3, 1e3, 121);
    println!("\nfamily    b(3)          max |b(1/g)+b(g)| on [1e-3, 1e3]");
    for fam in BFamily::builtin().into_iter().chain([sinh]) {
        let r = antisymmetry_report(&fam, &gs)?;
        println!("{:<9} {:<13.6} {:.2e}", fam.name(), fam.eval(3.0)?, r.max_residual);
    }
    Ok(())
}
