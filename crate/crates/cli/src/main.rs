use std::process::ExitCode;

use clap::Parser;
use covdyn_cli::{emit, run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = run(&cli);
    ExitCode::from(emit(&cli, &outcome) as u8)
}
