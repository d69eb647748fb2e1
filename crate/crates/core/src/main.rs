use std::process::ExitCode;

fn main() -> ExitCode {
    wafom_nets::cli::main_with_args(std::env::args_os())
}
