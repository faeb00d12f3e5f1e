use std::process::ExitCode;

use clap::Parser;

use hypres_cli::{dispatch, emit, serialize, Cli, RunConfig};

fn run() -> anyhow::Result<bool> {
    let budget = std::env::var("HYPRES_BUDGET").ok();
    let cfg = RunConfig::from_cli(Cli::parse(), budget.as_deref())?;
    let rep = dispatch(&cfg)?;
    emit(&serialize(&rep, cfg.format), cfg.output.as_ref())?;
    Ok(rep.passed())
}

// 0: every check passed, 1: some check failed, 2: usage, input or I/O error
fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("hypres: {e:#}");
            ExitCode::from(2)
        }
    }
}
