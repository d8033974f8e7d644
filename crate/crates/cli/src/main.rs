use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use mlqi_cli::{execute, Cli, CliError};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("mlqi: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let text = execute(cli)?.render(cli.global.format)?;
    match &cli.global.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Internal(format!("cannot write {}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Internal(e.to_string())),
    }
}
