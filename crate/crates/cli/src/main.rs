//! Command-line front end: load a scenario, run its analyses, emit the
//! results.
//!
//! Exit codes: 0 on success, 2 for configuration problems (bad flags, bad
//! scenario file, unknown builtin), 3 for analysis or output failures.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use mulsemi_cli::{builtins, emit, runner, scenario};
use scenario::{OutputFormat, Scenario};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "mulsemi",
    version,
    about = "Runs multiplication-operator and multiplier-flow analyses over scenario files"
)]
struct Cli {
    /// Scenario file to run.
    #[arg(long, value_name = "PATH", conflicts_with = "builtin")]
    scenario: Option<PathBuf>,

    /// Bundled scenario to run (see --list-builtins).
    #[arg(long, value_name = "NAME")]
    builtin: Option<String>,

    /// Where results go: a directory for csv, a file for json.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Output format; defaults to the scenario's [output] section, then json.
    #[arg(long, value_enum)]
    format: Option<Format>,

    /// List bundled scenario names and exit.
    #[arg(long)]
    list_builtins: bool,

    /// Print the loaded scenario back in canonical form instead of running.
    #[arg(long)]
    echo: bool,
}

const CONFIG_FAILURE: u8 = 2;
const RUN_FAILURE: u8 = 3;

fn main() -> ExitCode {
    let cli = Cli::parse();

    if cli.list_builtins {
        for name in builtins::BUILTIN_NAMES {
            println!("{name}");
        }
        return ExitCode::SUCCESS;
    }

    let scenario: Scenario = match (&cli.scenario, &cli.builtin) {
        (Some(path), None) => match scenario::load_scenario_file(path) {
            Ok(sc) => sc,
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(CONFIG_FAILURE);
            }
        },
        (None, Some(name)) => match builtins::builtin(name) {
            Some(sc) => sc,
            None => {
                eprintln!(
                    "error: no builtin named `{name}` (try one of: {})",
                    builtins::BUILTIN_NAMES.join(", ")
                );
                return ExitCode::from(CONFIG_FAILURE);
            }
        },
        _ => {
            eprintln!("error: pass exactly one of --scenario <PATH> or --builtin <NAME>");
            return ExitCode::from(CONFIG_FAILURE);
        }
    };

    if cli.echo {
        print!("{}", scenario.canonical_text());
        return ExitCode::SUCCESS;
    }

    // CLI flags win over the scenario's own [output] section.
    let format = match cli.format {
        Some(Format::Csv) => OutputFormat::Csv,
        Some(Format::Json) => OutputFormat::Json,
        None => scenario
            .output
            .as_ref()
            .map(|o| o.format)
            .unwrap_or(OutputFormat::Json),
    };
    let out: Option<PathBuf> = cli.out.clone().or_else(|| {
        scenario
            .output
            .as_ref()
            .and_then(|o| o.path.as_ref())
            .map(PathBuf::from)
    });

    if format == OutputFormat::Csv && out.is_none() {
        eprintln!("error: {}", emit::EmitError::CsvNeedsDir);
        return ExitCode::from(CONFIG_FAILURE);
    }

    let report = match runner::run(&scenario) {
        Ok(report) => report,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(RUN_FAILURE);
        }
    };

    let emitted = match format {
        OutputFormat::Csv => {
            let dir = out.as_deref().expect("checked above");
            emit::emit_csv_dir(&report, dir).map(|_| ())
        }
        OutputFormat::Json => emit::emit_json(&report, out.as_deref()),
    };
    if let Err(e) = emitted {
        eprintln!("error: {e}");
        return ExitCode::from(RUN_FAILURE);
    }
    ExitCode::SUCCESS
}
