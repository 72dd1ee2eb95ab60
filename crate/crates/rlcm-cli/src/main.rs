fn main() {
    std::process::exit(rlcm_cli::run_cli(std::env::args_os()));
}
