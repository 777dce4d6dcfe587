use std::process::ExitCode;

fn main() -> ExitCode {
    fracspline::cli::main_with_args(std::env::args_os())
}
