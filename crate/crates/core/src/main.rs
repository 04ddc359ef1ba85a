use std::path::PathBuf;
use std::process::ExitCode;

use anisodisp::harness::{self, Experiment, ExperimentConfig};
use anisodisp::Error;
use clap::Parser;

/// Run a configured experiment and write CSV series plus a summary.
#[derive(Parser, Debug)]
#[command(name = "anisodisp", version, about)]
struct Cli {
    /// One of lin-decay, sharpness, kernel, sqg, bouss, sweep.
    experiment: String,
    /// TOML configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Parallel sweep members.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Output directory; overrides `out` in the config, default `out`.
    #[arg(long)]
    out: Option<PathBuf>,
}

const EXIT_CHECK_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_NUMERIC: u8 = 3;

fn usage(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("anisodisp: {msg}");
    ExitCode::from(EXIT_USAGE)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let exp: Experiment = match cli.experiment.parse() {
        Ok(e) => e,
        Err(e) => return usage(e),
    };
    let text = match std::fs::read_to_string(&cli.config) {
        Ok(t) => t,
        Err(e) => return usage(format!("cannot read {}: {e}", cli.config.display())),
    };
    let config = match ExperimentConfig::from_toml(&text) {
        Ok(c) => c,
        Err(e) => return usage(e),
    };
    let out = cli
        .out
        .or_else(|| config.out.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out"));
    let report = match harness::run(exp, &config, cli.jobs) {
        Ok(r) => r,
        Err(e @ (Error::InvalidArgument { .. } | Error::InvalidGrid(_) | Error::Config(_))) => return usage(e),
        Err(e) => {
            eprintln!("anisodisp: {e}");
            return ExitCode::from(EXIT_NUMERIC);
        }
    };
    if let Err(e) = report.write(&out) {
        eprintln!("anisodisp: writing {}: {e}", out.display());
        return ExitCode::from(EXIT_NUMERIC);
    }
    print!("{}", report.summary());
    let failures = report.numeric_failures();
    if !failures.is_empty() {
        for f in failures {
            eprintln!("anisodisp: {f}");
        }
        return ExitCode::from(EXIT_NUMERIC);
    }
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_CHECK_FAIL)
    }
}
