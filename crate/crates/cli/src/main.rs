mod args;
mod commands;

use std::process::ExitCode;

use clap::Parser;
use dctstego::metrics::CountingAlloc;
use dctstego::ErrorClass;

#[global_allocator]
static ALLOC: CountingAlloc = CountingAlloc;

fn exit_code(class: ErrorClass) -> u8 {
    match class {
        ErrorClass::Usage => 2,
        ErrorClass::Io => 3,
        ErrorClass::Capacity => 4,
        ErrorClass::Auth => 5,
        ErrorClass::Numeric => 6,
    }
}

fn main() -> ExitCode {
    let cli = args::Cli::parse();
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {failure}");
            ExitCode::from(exit_code(failure.error.class()))
        }
    }
}
