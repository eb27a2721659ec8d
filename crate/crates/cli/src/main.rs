use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use fockkit_cli::config::Format;
use fockkit_cli::{parse_config, run_subcommand, Command};

/// Fock-space Toeplitz experiments driven by a JSON config.
///
/// Exit status: 0 when every tolerance check passes, 1 when a check fails
/// (the report is still written), 2 on configuration or numerical errors.
#[derive(Parser, Debug)]
#[command(name = "fockkit", version)]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// JSON run configuration; defaults to `{"alpha": 1}`.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Overrides `truncation` from the config.
    #[arg(long)]
    truncation: Option<usize>,
    /// Seed for randomized corpora.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<bool, String> {
    let text = match &cli.config {
        Some(path) => std::fs::read_to_string(path).map_err(|e| format!("reading {}: {e}", path.display()))?,
        None => r#"{"alpha": 1}"#.to_string(),
    };
    let mut cfg = parse_config(&text).map_err(|e| e.to_string())?;
    if let Some(n) = cli.truncation {
        cfg.truncation = n;
        cfg.validate().map_err(|e| e.to_string())?;
    }
    let format = cli
        .format
        .or(cfg.output.as_ref().map(|o| o.format))
        .unwrap_or(Format::Json);
    let out = cli
        .out
        .clone()
        .or_else(|| cfg.output.as_ref().and_then(|o| o.path.as_ref().map(PathBuf::from)));

    let outcome = run_subcommand(cli.command, &cfg, cli.seed).map_err(|e| e.to_string())?;
    let json = outcome.report.to_json();
    match format {
        Format::Json => write(out.as_ref(), &json)?,
        Format::Csv => {
            let table = outcome.table.clone().unwrap_or_else(|| outcome.report.checks_csv());
            write(out.as_ref(), &table)?;
            // the CSV has no room for metadata; the full report goes alongside
            match &out {
                Some(path) => {
                    let mut side = path.clone().into_os_string();
                    side.push(".report.json");
                    write(Some(&PathBuf::from(side)), &json)?;
                }
                None => eprint!("{json}"),
            }
        }
    }
    for c in outcome.report.checks.iter().filter(|c| !c.passed) {
        eprintln!("check failed: {} = {} (tolerance {})", c.name, c.value, c.tolerance);
    }
    Ok(outcome.report.passed)
}

fn write(path: Option<&PathBuf>, text: &str) -> Result<(), String> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| format!("writing {}: {e}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
