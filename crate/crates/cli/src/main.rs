use std::process::ExitCode;

use bisoliton_cli::{diagnose, run, Cli};
use clap::Parser;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            for line in &outcome.summary {
                println!("{line}");
            }
            for f in &outcome.files {
                println!("wrote {}", f.display());
            }
            if outcome.passed {
                ExitCode::SUCCESS
            } else {
                eprintln!("error: acceptance thresholds failed (see the check report)");
                ExitCode::from(1)
            }
        }
        Err(err) => {
            match diagnose(&err) {
                Some((name, h)) => {
                    eprintln!("error [{name}]: {err:#}");
                    eprintln!("hint: {h}");
                }
                None => eprintln!("error: {err:#}"),
            }
            ExitCode::from(2)
        }
    }
}
