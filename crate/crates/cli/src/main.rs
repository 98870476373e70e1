use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use lds_cli::{load, render, run_command, Cli, CliError};

fn run(cli: &Cli) -> Result<String, CliError> {
    let file = load(cli.command.file())?;
    for w in &file.warnings {
        eprintln!("warning: {w}");
    }
    let report = run_command(cli, &file)?;
    Ok(render(cli, &report))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.as_bytes()).is_err() {
                return ExitCode::from(2);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
