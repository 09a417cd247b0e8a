use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;
use dimerctl::cli::Cli;
use dimerctl::{run, CliError};

fn main() -> ExitCode {
    // clap exits with status 2 on malformed flags
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let result = run(cli.command, &mut out);
    let flushed = out.flush();
    match result.and(flushed.map_err(Into::into)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => match e.downcast_ref::<CliError>() {
            Some(CliError::ValidationFailed(msg)) => {
                eprintln!("error: {msg}");
                ExitCode::from(1)
            }
            Some(CliError::Usage(msg)) => {
                eprintln!("error: {msg}");
                ExitCode::from(2)
            }
            None => {
                eprintln!("error: {e:#}");
                ExitCode::from(1)
            }
        },
    }
}
