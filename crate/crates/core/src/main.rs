use std::process::ExitCode;

use clap::Parser;
use hpdns::cli::{run, Cli};

fn main() -> ExitCode {
    run(Cli::parse())
}
