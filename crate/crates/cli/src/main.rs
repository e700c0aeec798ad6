use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use framekit_core::fields::{Field, FIELD_IDS};
use framekit_core::frames::{FrameKind, FRAME_IDS};
use framekit_core::harness::run_suite_with_threads;
use framekit_core::{emit_report, parse_scenario, CheckId, ReportFormat};
use log::info;

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const THREADS_VAR: &str = "FRAMEKIT_THREADS";

#[derive(Parser)]
#[command(name = "framekit", version, about = "Checks frame-transformation identities of fluid kinematics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the checks of a scenario file and emit a report.
    Verify {
        /// Scenario file (TOML).
        #[arg(long)]
        scenario: PathBuf,
        /// Override the scenario's sampling seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the number of sample points.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        samples: Option<u64>,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Print the check, frame and field catalogs.
    List,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Table,
}

impl From<Format> for ReportFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Json => ReportFormat::Json,
            Format::Table => ReportFormat::Table,
        }
    }
}

fn usage_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(EXIT_USAGE)
}

fn thread_limit() -> Result<Option<usize>, String> {
    match std::env::var(THREADS_VAR) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(Some(n)),
            _ => Err(format!("{THREADS_VAR} must be a positive integer, got `{v}`")),
        },
    }
}

fn list() -> String {
    let mut out = String::from("checks:\n");
    for c in CheckId::ALL {
        let applies = if c.needs_flow() { "flow" } else { "scalar" };
        out += &format!("  {:<28}tol {:.0e}, {applies} fields\n", c.as_str(), c.default_tolerance());
    }
    out += "\nframes:\n";
    for id in FRAME_IDS {
        out += &format!("  {:<28}{}\n", id, FrameKind::param_keys(id).join(", "));
    }
    out += "\nfields:\n";
    for id in FIELD_IDS {
        let class = match Field::default_for(id) {
            Ok(Field::Flow(_)) => "flow",
            _ => "scalar",
        };
        out += &format!("  {:<28}{class}: {}\n", id, Field::param_keys(id).join(", "));
    }
    out
}

fn verify(
    scenario: PathBuf,
    seed: Option<u64>,
    samples: Option<u64>,
    out: Option<PathBuf>,
    format: Format,
) -> ExitCode {
    let text = match fs::read_to_string(&scenario) {
        Ok(t) => t,
        Err(e) => return usage_error(format!("cannot read {}: {e}", scenario.display())),
    };
    let mut s = match parse_scenario(&text) {
        Ok(s) => s,
        Err(e) => return usage_error(format!("{}: {e}", scenario.display())),
    };
    if let Some(seed) = seed {
        s.seed = seed;
    }
    if let Some(n) = samples {
        s.samples = match usize::try_from(n) {
            Ok(n) => n,
            Err(_) => return usage_error("--samples is too large"),
        };
    }
    let threads = match thread_limit() {
        Ok(t) => t,
        Err(e) => return usage_error(e),
    };

    let report = match run_suite_with_threads(&s, threads) {
        Ok(r) => r,
        Err(e) => return usage_error(e),
    };
    let text = emit_report(&report, format.into());
    match out {
        Some(path) => {
            if let Err(e) = fs::write(&path, &text) {
                return usage_error(format!("cannot write {}: {e}", path.display()));
            }
            info!("report written to {}", path.display());
        }
        None => print!("{text}"),
    }
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAIL)
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match cli.command {
        Command::Verify { scenario, seed, samples, out, format } => verify(scenario, seed, samples, out, format),
        Command::List => {
            print!("{}", list());
            ExitCode::SUCCESS
        }
    }
}
