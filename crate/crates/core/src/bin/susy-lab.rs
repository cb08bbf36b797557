fn main() {
    std::process::exit(susy_lab::cli::run(std::env::args_os()));
}
