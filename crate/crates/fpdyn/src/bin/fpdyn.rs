fn main() {
    std::process::exit(fpdyn::cli::run_cli(std::env::args_os()));
}
