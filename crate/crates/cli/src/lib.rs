//! Command-line front end for the spacings statistics.
//!
//! [`run`] is the whole program with its streams injected, so tests drive it
//! in-process. Exit codes: 0 success, 1 input or configuration error,
//! 2 the statistic is undefined on the data (ties under a log, …).

pub mod args;
pub mod commands;
pub mod error;
pub mod input;
pub mod report;

use std::ffi::OsString;
use std::io::{BufRead, Write};

use clap::Parser;

use args::{Cli, Command, Format};
pub use error::CliError;
pub use report::ReportDocument;

/// Parses `argv` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(argv: I, stdin: &mut dyn BufRead, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let to_stdout = !e.use_stderr();
            let sink: &mut dyn Write = if to_stdout { stdout } else { stderr };
            let _ = write!(sink, "{}", e.render());
            return if to_stdout { 0 } else { 1 };
        }
    };
    let (format, outcome) = match &cli.command {
        Command::Test(a) => (a.output.format, commands::cmd_test(a, stdin)),
        Command::Simulate(a) => (a.output.format, commands::cmd_simulate(a)),
        Command::Sigma(a) => (a.output.format, commands::cmd_sigma(a)),
        Command::Meancheck(a) => (a.output.format, commands::cmd_meancheck(a)),
    };
    let written = outcome.and_then(|doc| {
        let text = match format {
            Format::Json => doc.to_json(),
            Format::Text => doc.to_text(),
        };
        stdout.write_all(text.as_bytes()).map_err(|e| CliError::Output(e.to_string()))
    });
    match written {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "spacings: {e}");
            e.exit_code()
        }
    }
}
