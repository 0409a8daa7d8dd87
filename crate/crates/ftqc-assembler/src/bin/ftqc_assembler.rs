//! Binary entry point.

fn main() {
    std::process::exit(ftqc_assembler::cli::run());
}
