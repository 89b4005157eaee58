use std::process::ExitCode;

fn main() -> ExitCode {
    uncloneable_lab::cli::main_with_args(std::env::args().collect())
}
