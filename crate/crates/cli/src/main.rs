use std::process::ExitCode;

use clap::Parser;
use mingraph_cli::{run, Cli};

fn main() -> ExitCode {
    // Usage errors from clap count as configuration errors.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { mingraph_cli::error::EXIT_CONFIG } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    ExitCode::from(run(&cli))
}
