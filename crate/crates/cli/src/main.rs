use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use pgx_cli::commands::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli).and_then(|out| Ok((out.render()?, out))) {
        Ok((rendered, out)) => {
            for w in &out.warnings {
                eprintln!("warning: {w}");
            }
            let _ = std::io::stdout().write_all(rendered.as_bytes());
            if out.failed {
                ExitCode::FAILURE
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
