use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use gm_cli::{catalog, run_files, RunOptions};
use groupoid_measures::report::Report;

/// Runs transverse-measure checks described by scenario files.
///
/// Exit status: 0 when every row passes, 1 when some row fails, 2 on errors.
#[derive(Parser)]
#[command(name = "gm", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run scenario files and write a comparison report.
    Run {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Report file (default: standard output).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Evaluate scenarios in parallel; row order is preserved.
        #[arg(long)]
        parallel: bool,
        /// Tolerance override `CHECK=VALUE`, repeatable.
        #[arg(long = "tol", value_parser = parse_tolerance)]
        tolerances: Vec<(String, f64)>,
    },
    /// List the available checks.
    ListChecks {
        /// Only checks of this engine (finite, smooth or symplectic).
        #[arg(long)]
        engine: Option<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

fn parse_tolerance(text: &str) -> Result<(String, f64), String> {
    let (key, value) = text.split_once('=').ok_or("expected CHECK=VALUE")?;
    let value: f64 = value.parse().map_err(|_| format!("`{value}` is not a number"))?;
    if value.is_nan() || value < 0.0 {
        return Err("tolerance must be nonnegative".into());
    }
    Ok((key.to_string(), value))
}

fn write_report(report: &Report, format: Format, out: Option<&PathBuf>) -> Result<()> {
    let mut writer: Box<dyn Write> = match out {
        Some(path) => Box::new(BufWriter::new(File::create(path).with_context(|| format!("cannot create {}", path.display()))?)),
        None => Box::new(io::stdout().lock()),
    };
    match format {
        Format::Csv => report.write_csv(&mut writer).map_err(|e| anyhow!("writing report: {e}"))?,
        Format::Json => writeln!(writer, "{}", report.to_json())?,
    }
    writer.flush()?;
    Ok(())
}

fn run(command: Command) -> Result<bool> {
    match command {
        Command::Run { files, out, format, parallel, tolerances } => {
            let options = RunOptions {
                parallel,
                tolerance_overrides: tolerances.into_iter().collect::<BTreeMap<_, _>>(),
                seed_override: None,
            }
            .seed_from_env()?;
            let report = run_files(&files, &options)?;
            write_report(&report, format, out.as_ref())?;
            let summary = report.summary();
            eprintln!("{} rows: {} passed, {} failed", summary.total, summary.passed, summary.failed);
            for row in report.rows.iter().filter(|r| !r.pass) {
                eprintln!("FAIL {} {}: rel_err {:e} > {:e}", row.scenario, row.check, row.rel_err, row.tolerance);
            }
            Ok(report.all_pass())
        }
        Command::ListChecks { engine } => {
            for line in catalog::list(engine.as_deref()) {
                println!("{line}");
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
