use std::process::ExitCode;

fn main() -> ExitCode {
    tversky_cli::run(std::env::args_os())
}
