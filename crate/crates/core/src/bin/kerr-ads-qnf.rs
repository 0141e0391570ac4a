use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(kerr_ads_qnf::cli::main_with_args(std::env::args_os()))
}
