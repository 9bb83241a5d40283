use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(covshift::cli::run_from_args(std::env::args_os()))
}
