//! `cvqkd`: analytic reports, Monte Carlo runs, parameter scans and the
//! table of published figures.

mod render;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use cvqkd_core::figures::{self, FigureRow};
use cvqkd_core::montecarlo::{agreement, run_montecarlo, Agreement};
use cvqkd_core::protocol::{run_analytic, BerReport, EveStrategy, ProtocolError, Scenario};
use rayon::prelude::*;
use serde::Serialize;

#[derive(Parser)]
#[command(name = "cvqkd", version, about = "Continuous-variable QKD simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form error rates for one scenario.
    Analytic {
        config: PathBuf,
        /// Also write the full report as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Monte Carlo run compared against the analytic rates.
    Simulate {
        config: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        bits: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Analytic rates over an evenly spaced parameter grid.
    Scan {
        config: PathBuf,
        #[arg(long, value_enum)]
        param: Param,
        #[arg(long)]
        from: f64,
        #[arg(long)]
        to: f64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        steps: u64,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Published figures next to the computed values.
    Reproduce {
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Param {
    #[value(name = "tap_fraction")]
    TapFraction,
    #[value(name = "squeezing_db")]
    SqueezingDb,
    #[value(name = "loss")]
    Loss,
}

impl Param {
    fn name(self) -> &'static str {
        match self {
            Param::TapFraction => "tap_fraction",
            Param::SqueezingDb => "squeezing_db",
            Param::Loss => "loss",
        }
    }

    fn apply(self, base: &Scenario, v: f64) -> Scenario {
        let mut s = base.clone();
        match self {
            Param::TapFraction => s.eve = EveStrategy::Tap { fraction: v },
            Param::SqueezingDb => s.squeezing_db = v,
            Param::Loss => s.loss = v,
        }
        s
    }
}

/// Failure classes with their exit codes.
enum Failure {
    /// Bad input: unreadable or invalid config, bad argument values.
    Usage(anyhow::Error),
    /// Anything else, including failed reproduce rows.
    Run(anyhow::Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Run(_) => 1,
        }
    }
}

impl From<ProtocolError> for Failure {
    fn from(e: ProtocolError) -> Self {
        match e {
            ProtocolError::Scenario(_) => Failure::Usage(e.into()),
            other => Failure::Run(other.into()),
        }
    }
}

#[derive(Serialize)]
struct RunResult<'a> {
    scenario: &'a Scenario,
    analytic: &'a BerReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    empirical: Option<&'a BerReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    agreement: Option<&'a Agreement>,
}

#[derive(Serialize)]
struct ReproduceResult<'a> {
    rows: &'a [FigureRow],
    all_pass: bool,
}

fn load(path: &Path) -> Result<Scenario, Failure> {
    Scenario::from_path(path).map_err(|e| Failure::Usage(e.into()))
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text)
        .with_context(|| format!("cannot write {}", path.display()))
        .map_err(Failure::Run)
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Failure::Run(e.into()))?;
    text.push('\n');
    write_file(path, &text)
}

fn grid(from: f64, to: f64, steps: u64) -> Vec<f64> {
    if steps == 1 {
        return vec![from];
    }
    let last = (steps - 1) as f64;
    (0..steps)
        .map(|k| from + (to - from) * k as f64 / last)
        .collect()
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Analytic { config, json } => {
            let s = load(&config)?;
            let r = run_analytic(&s)?;
            print!("{}", render::analytic_table(&s, &r));
            if let Some(path) = json {
                write_json(
                    &path,
                    &RunResult {
                        scenario: &s,
                        analytic: &r,
                        empirical: None,
                        agreement: None,
                    },
                )?;
            }
        }
        Command::Simulate {
            config,
            bits,
            seed,
            json,
        } => {
            let s = load(&config)?;
            let a = run_analytic(&s)?;
            let e = run_montecarlo(&s, bits, seed)?;
            let z = agreement(&a, &e);
            print!("{}", render::simulate_table(&s, &a, &e, &z, seed));
            if let Some(path) = json {
                write_json(
                    &path,
                    &RunResult {
                        scenario: &s,
                        analytic: &a,
                        empirical: Some(&e),
                        agreement: Some(&z),
                    },
                )?;
            }
        }
        Command::Scan {
            config,
            param,
            from,
            to,
            steps,
            csv,
        } => {
            let base = load(&config)?;
            let points: Vec<Scenario> = grid(from, to, steps)
                .into_iter()
                .map(|v| param.apply(&base, v))
                .collect();
            for p in &points {
                p.validate().map_err(|e| Failure::Usage(e.into()))?;
            }
            let reports = points
                .par_iter()
                .map(run_analytic)
                .collect::<Result<Vec<_>, _>>()?;
            let rows: Vec<(f64, BerReport)> =
                grid(from, to, steps).into_iter().zip(reports).collect();
            print!("{}", render::scan_table(param.name(), &rows));
            if let Some(path) = csv {
                write_file(&path, &render::scan_csv(param.name(), &rows))?;
            }
        }
        Command::Reproduce { json } => {
            let rows = figures::reproduce()?;
            let ok = figures::all_pass(&rows);
            print!("{}", render::reproduce_table(&rows));
            if let Some(path) = json {
                write_json(
                    &path,
                    &ReproduceResult {
                        rows: &rows,
                        all_pass: ok,
                    },
                )?;
            }
            if !ok {
                return Err(Failure::Run(anyhow::anyhow!("some figures failed")));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let code = f.code();
            let (Failure::Usage(e) | Failure::Run(e)) = f;
            eprintln!("error: {e:#}");
            ExitCode::from(code)
        }
    }
}
