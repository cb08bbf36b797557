//! Writes the A1 and A2 figures (curves CSV, levels CSV, SVG, metadata)
//! through the command-line entry point.
//!
//!     cargo run --release --example figure_export [OUT_DIR]

fn main() {
    let out = std::env::args().nth(1).unwrap_or_else(|| "figures".into());
    for name in ["A1", "A2"] {
        let code = susy_lab::cli::run(["susy-lab", "figure", name, "--out", out.as_str()]);
        if code != 0 {
            std::process::exit(code);
        }
    }
}
