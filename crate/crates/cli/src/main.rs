fn main() {
    std::process::exit(benford_cli::run_cli(std::env::args_os()));
}
