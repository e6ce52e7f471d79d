use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use fuelrod_cli::{scenarios, CliError, Config};

/// Runs one rod-dynamics scenario described by a key = value file.
#[derive(Debug, Parser)]
#[command(name = "fuelrod", version)]
struct Args {
    /// Configuration file.
    config: PathBuf,
    /// Directory for the CSV files.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Override solver.modes.
    #[arg(long)]
    modes: Option<usize>,
    /// Suppress the per-file summary lines.
    #[arg(long)]
    quiet: bool,
}

fn run(args: &Args) -> Result<Vec<scenarios::Output>, CliError> {
    let text = std::fs::read_to_string(&args.config).map_err(|source| CliError::ConfigFile {
        path: args.config.clone(),
        source,
    })?;
    let mut cfg = Config::parse(&text)?;
    if let Some(n) = args.modes {
        cfg.solver.modes = n;
    }
    scenarios::run(&cfg, &args.out)
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(outputs) => {
            if !args.quiet {
                for o in &outputs {
                    println!("{}", o.summary());
                }
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("fuelrod: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
