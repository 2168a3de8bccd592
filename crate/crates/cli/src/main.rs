use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use twofold_cli::commands::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            for line in &outcome.diagnostics {
                eprintln!("{line}");
            }
            if !outcome.stdout.is_empty() {
                // a closed pipe downstream is not an error of ours
                let _ = writeln!(std::io::stdout().lock(), "{}", outcome.stdout);
            }
            ExitCode::from(outcome.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
