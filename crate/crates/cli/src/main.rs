//! Experiment harness CLI.
//!
//! Exit codes: 0 success, 2 invalid arguments, 3 guard violations (length
//! beyond the desk-scale/oracle caps, unusable split width).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ozfft::harness::{self, ExperimentSpec, Method, RunRow, CSV_HEADER};

#[derive(Parser)]
#[command(
    name = "ozfft",
    version,
    about = "Double-precision FFT from 32-bit NTTs: experiment runner"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run one experiment cell and emit a CSV row.
    Run {
        /// Transform length (a power of two in [2^1, 2^16]).
        #[arg(long)]
        n: usize,
        /// Exponent-spread parameter of the input generator.
        #[arg(long)]
        phi: f64,
        /// RNG seed.
        #[arg(long)]
        seed: u64,
        /// Split cap: a positive integer or "inf" (written as 0 in CSV).
        #[arg(long = "K", value_parser = parse_k)]
        k: KCap,
        /// NTT-domain accumulation bound.
        #[arg(long = "L")]
        l: u32,
        /// proposed | f64_stockham | f64_bluestein | ts_stockham | ts_bluestein
        #[arg(long, value_parser = parse_method)]
        method: Method,
        /// Write header + row to this file instead of stdout.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Run a full grid and write one CSV row per cell.
    Sweep {
        /// log2 of the smallest length.
        #[arg(long = "n-min")]
        n_min: u32,
        /// log2 of the largest length.
        #[arg(long = "n-max")]
        n_max: u32,
        /// Comma-separated phi values.
        #[arg(long, value_delimiter = ',', required = true)]
        phi: Vec<f64>,
        /// Comma-separated method names.
        #[arg(long, value_delimiter = ',', required = true, value_parser = parse_method)]
        methods: Vec<Method>,
        /// Comma-separated split caps (integers or "inf").
        #[arg(long = "K", value_delimiter = ',', required = true, value_parser = parse_k)]
        k: Vec<KCap>,
        /// Comma-separated accumulation bounds.
        #[arg(long = "L", value_delimiter = ',', required = true)]
        l: Vec<u32>,
        /// RNG seed shared by every cell.
        #[arg(long)]
        seed: u64,
        /// Output CSV path.
        #[arg(long)]
        csv: PathBuf,
    },
    /// Emit the split-width table (four alpha variants, single precision).
    AlphaTable {
        #[arg(long = "n-min")]
        n_min: u32,
        #[arg(long = "n-max")]
        n_max: u32,
    },
}

#[derive(Clone, Copy)]
struct KCap(Option<u32>);

fn parse_k(s: &str) -> Result<KCap, String> {
    if s.eq_ignore_ascii_case("inf") {
        return Ok(KCap(None));
    }
    match s.parse::<u32>() {
        Ok(0) | Err(_) => Err(format!("K must be a positive integer or 'inf', got '{s}'")),
        Ok(v) => Ok(KCap(Some(v))),
    }
}

fn parse_method(s: &str) -> Result<Method, String> {
    Method::parse(s).map_err(|e| e.to_string())
}

fn write_output(path: Option<&PathBuf>, content: &str) -> Result<(), ozfft::Error> {
    match path {
        Some(p) => std::fs::write(p, content).map_err(|source| ozfft::Error::Io {
            path: p.display().to_string(),
            source,
        }),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), ozfft::Error> {
    match cli.cmd {
        Cmd::Run {
            n,
            phi,
            seed,
            k,
            l,
            method,
            csv,
        } => {
            let row: RunRow = harness::run_experiment(&ExperimentSpec {
                n,
                phi,
                seed,
                k_cap: k.0,
                l_bound: l,
                method,
                repeats: 1,
            })?;
            let content = format!("{CSV_HEADER}\n{}\n", row.csv_line());
            write_output(csv.as_ref(), &content)
        }
        Cmd::Sweep {
            n_min,
            n_max,
            phi,
            methods,
            k,
            l,
            seed,
            csv,
        } => {
            let k_caps: Vec<Option<u32>> = k.iter().map(|c| c.0).collect();
            let content = harness::sweep(n_min, n_max, &phi, &methods, &k_caps, &l, seed)?;
            write_output(Some(&csv), &content)
        }
        Cmd::AlphaTable { n_min, n_max } => {
            let content = harness::alpha_table(n_min, n_max)?;
            write_output(None, &content)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_guard() {
                ExitCode::from(3)
            } else {
                ExitCode::from(2)
            }
        }
    }
}
