fn main() {
    std::process::exit(jll_core::cli::run(std::env::args_os()));
}
