use std::process::ExitCode;

fn main() -> ExitCode {
    meecda_sim::cli::run_cli(std::env::args_os())
}
