use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use flatchain::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            for w in &out.warnings {
                eprintln!("warning: {w}");
            }
            let written = match &cli.output {
                Some(path) => flatchain::report::write_text(path, &out.artifact),
                None => {
                    let mut stdout = std::io::stdout().lock();
                    stdout.write_all(out.artifact.as_bytes()).map_err(|e| flatchain::CliError::Io {
                        path: "stdout".into(),
                        source: e,
                    })
                }
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(e.exit_code());
            }
            eprintln!("{}", out.summary);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
