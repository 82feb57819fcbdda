//! Command-line front end: scenario files, scans, figure presets, reports.

pub mod config;
pub mod output;
pub mod preset;
pub mod report;

use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

pub use config::{parse_scenario, Mode, OutputKind, ParseError, Scenario};
pub use output::{fmt_float, run_scan, ScanRow, ScanTable};
pub use preset::{run_preset, Preset, PresetOutput};
pub use report::{delta_case, emit_report, DeltaCase};

use crate::error::Error;
use crate::par::Execution;
use crate::resonance::{analyze, classify_relation};

#[derive(Debug, Parser)]
#[command(
    name = "pointscatter",
    version,
    about = "Transmission through one or two point interactions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Scenario file (`key = value` lines)
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Override k_max
    #[arg(long, global = true)]
    pub k_max: Option<f64>,
    /// Override the number of scan samples
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    /// Run on one thread
    #[arg(long, global = true)]
    pub sequential: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample T on a uniform k grid and write CSV
    Scan,
    /// List perfect-transmission wavenumbers
    Roots,
    /// Name the boundary class of each junction and their relation
    Classify,
    /// Regenerate the data for one of the reference figures
    Preset { name: Preset },
    /// Human-readable summary
    Report,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Numeric(#[from] Error),
    #[error("{0}")]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Parse(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

fn load(cli: &Cli) -> Result<Scenario, CliError> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| CliError::Usage("this command needs --config <path>".into()))?;
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(io::Error::new(e.kind(), format!("{}: {e}", path.display()))))?;
    let mut s = parse_scenario(&text)?;
    if let Some(k) = cli.k_max {
        s.k_max = k;
    }
    if let Some(n) = cli.samples {
        s.samples = n;
    }
    s.validate()?;
    Ok(s)
}

fn write_file(dir: &Path, name: &str, body: &str) -> io::Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(name);
    std::fs::write(&path, body)?;
    Ok(path)
}

fn scan_script(csv: &str) -> String {
    format!(
        "set datafile separator \",\"\nset datafile columnheaders\nset xlabel \"k\"\nset ylabel \"T\"\nset yrange [0:1.05]\nplot \"{csv}\" using 1:2 with lines title \"T\"\n"
    )
}

pub fn run(cli: &Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    let exec = if cli.sequential {
        Execution::Sequential
    } else {
        Execution::default()
    };
    match &cli.command {
        Command::Scan => {
            let s = load(cli)?;
            let csv = run_scan(&s, exec)?.to_csv();
            match &cli.out {
                None => stdout.write_all(csv.as_bytes())?,
                Some(dir) => {
                    let mut written = vec![write_file(dir, "scan.csv", &csv)?];
                    if s.outputs.contains(&OutputKind::PlotScript) {
                        written.push(write_file(dir, "scan.gp", &scan_script("scan.csv"))?);
                    }
                    if s.outputs.contains(&OutputKind::Report) {
                        written.push(write_file(dir, "report.txt", &emit_report(&s)?)?);
                    }
                    for p in written {
                        writeln!(stdout, "{}", p.display())?;
                    }
                }
            }
        }
        Command::Roots => {
            let s = load(cli)?;
            writeln!(stdout, "k,kind,residual")?;
            match s.double_config() {
                Some(config) => {
                    for r in analyze(&config, s.k_max)?.roots {
                        writeln!(
                            stdout,
                            "{},{},{}",
                            fmt_float(r.k),
                            r.kind,
                            fmt_float(r.residual)
                        )?;
                    }
                }
                None => {
                    let f = s.j1.factors();
                    let (qq, pp) = (f.qq(), f.pp_prod());
                    if qq * pp < 0.0 && !s.j1.is_opaque() {
                        let k = (-qq / pp).sqrt();
                        if k <= s.k_max {
                            let res = (crate::single::t1(&s.j1, k)? - 1.0).abs();
                            writeln!(stdout, "{},InverseSqrt,{}", fmt_float(k), fmt_float(res))?;
                        }
                    }
                }
            }
        }
        Command::Classify => {
            let s = load(cli)?;
            writeln!(stdout, "junction 1: {}", s.j1.classify())?;
            if let Some(config) = s.double_config() {
                writeln!(stdout, "junction 2: {}", config.j2.classify())?;
                writeln!(stdout, "relation: {}", classify_relation(&config))?;
            }
        }
        Command::Preset { name } => {
            let dir = cli.out.clone().unwrap_or_else(|| PathBuf::from("."));
            for p in run_preset(*name, exec)?.write_to(&dir)? {
                writeln!(stdout, "{}", p.display())?;
            }
        }
        Command::Report => {
            let s = load(cli)?;
            stdout.write_all(emit_report(&s)?.as_bytes())?;
        }
    }
    Ok(())
}
