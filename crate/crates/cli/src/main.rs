mod args;
mod commands;
mod report;

use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;

use args::{Cli, Command};
use commands::CliError;

fn output_of(cmd: &Command) -> Option<&args::Output> {
    match cmd {
        Command::Subdiff { output, .. }
        | Command::Graph { output, .. }
        | Command::Localdim { output, .. }
        | Command::Verify { output, .. }
        | Command::Minty { output, .. }
        | Command::Solve { output, .. }
        | Command::Sensitivity { output, .. }
        | Command::Access { output, .. }
        | Command::Validate { output, .. } => Some(output),
        Command::Gen { .. } => None,
    }
}

fn fail(e: CliError) -> ExitCode {
    match e {
        CliError::Usage(m) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        CliError::Failure(m) => {
            eprintln!("failed: {m}");
            ExitCode::from(1)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Command::Gen { seed, dim, out } = &cli.command {
        return match commands::gen(*seed, *dim, out.as_deref()) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => fail(e),
        };
    }
    let output = output_of(&cli.command)
        .expect("report commands carry output flags")
        .clone();
    let start = Instant::now();
    let report = match commands::run(&cli.command) {
        Ok(r) => r,
        Err(e) => return fail(e),
    };
    let wall = output.timing.then(|| start.elapsed().as_millis());
    let text = report.render(wall);
    match &output.out {
        Some(p) => {
            if let Err(e) = std::fs::write(p, &text) {
                return fail(CliError::Usage(format!("{}: {e}", p.display())));
            }
        }
        None => print!("{text}"),
    }
    if report.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
