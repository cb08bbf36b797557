//! Every invariant check, printed as a table.
//!
//!     cargo run --release --example verify_suite [CHECK...]

use susy_lab::verify::{run, run_all, VerifyContext};

fn main() -> susy_lab::Result<()> {
    let names: Vec<String> = std::env::args().skip(1).collect();
    let ctx = VerifyContext::default();
    let report = if names.is_empty() {
        run_all(&ctx)?
    } else {
        run(&names.iter().map(String::as_str).collect::<Vec<_>>(), &ctx)?
    };
    print!("{}", report.table());
    std::process::exit(if report.all_passed() { 0 } else { 1 });
}
