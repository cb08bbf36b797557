//! Partner potentials at s and -s and the exchange V_-(x, -s) = V_+(x, s).
//!
//!     cargo run --example dual_pair [OUT_DIR]
//!
//! With OUT_DIR, both pairs are written as CSV.

use std::path::PathBuf;

use susy_lab::output::{pair_csv, write_file};
use susy_lab::susy::{build_pair, duality_residual, identity_residuals};
use susy_lab::{Grid, Kernel};

fn main() -> susy_lab::Result<()> {
    let out = std::env::args().nth(1).map(PathBuf::from);
    let kernels = [
        Kernel::constant(2.0)?,
        Kernel::harmonic(1.0)?,
        Kernel::even_polynomial(vec![0.0, 0.0, 1.0])?,
    ];
    for kernel in &kernels {
        for s in [0.25, 1.0 / 3.0, 0.6] {
            let grid = Grid::new(kernel.default_half_extent(s), 4001)?;
            let r = duality_residual(kernel, s, &grid)?;
            let pair = build_pair(kernel, s, &grid)?;
            let id = identity_residuals(&pair, kernel, &grid);
            println!(
                "{kernel:<20} s = {s:.4}  |V-(-s) - V+(s)| = {:.1e}  max|V| = {:.3e}  |V- - (W^2 - W')| = {:.1e}",
                r.max_abs, r.scale, id.factor_minus
            );
            if let Some(dir) = &out {
                for sv in [s, -s] {
                    let name = format!("{}_s{sv:+.4}.csv", kernel.label());
                    write_file(&dir.join(name), &pair_csv(&build_pair(kernel, sv, &grid)?)?)?;
                }
            }
        }
    }
    Ok(())
}
