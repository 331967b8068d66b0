use std::process::exit;

fn main() {
    exit(groundcov_cli::app::run_cli(std::env::args_os()));
}
