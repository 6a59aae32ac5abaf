use std::process::ExitCode;

fn main() -> ExitCode {
    noisygt::cli::main_from(std::env::args_os())
}
