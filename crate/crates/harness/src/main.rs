fn main() {
    std::process::exit(quantsel_harness::cli::run(std::env::args_os()));
}
