//! Kernels beyond the built-ins: an even polynomial and a tabulated CSV.
//!
//!     cargo run --release --example custom_kernel

use susy_lab::lab::run_spectrum;
use susy_lab::susy::duality_residual;
use susy_lab::{Grid, Kernel, TabulatedKernel};

fn main() -> susy_lab::Result<()> {
    // k(x) = 1 + x^2/4 + x^4/10
    let poly = Kernel::even_polynomial(vec![1.0, 0.25, 0.1])?;
    let s = -0.4;
    let grid = Grid::new(poly.default_half_extent(s), 4001)?;
    let run = run_spectrum(&poly, s, &grid, None)?;
    println!("{poly}: status {}", run.pairing.status.as_str());
    println!("  H- {:?}", &run.minus.eigenvalues[..4]);
    println!("  H+ {:?}", &run.plus.eigenvalues[..3]);

    // the same constant kernel, read from a table
    let mut csv = String::from("x,k\n");
    for i in -400..=400 {
        csv.push_str(&format!("{},4\n", i as f64 * 0.05));
    }
    let table = Kernel::EvenTabulated(TabulatedKernel::from_csv_reader(csv.as_bytes())?);
    let grid = Grid::new(20.0, 8001)?;
    let run = run_spectrum(&table, -0.25, &grid, None)?;
    println!("{table}: H- {:?}", run.minus.eigenvalues);
    println!("  duality residual {:.1e}", duality_residual(&table, -0.25, &grid)?.max_abs);
    Ok(())
}
