//! rkamp: analysis, optimization and benchmarking of explicit Runge-Kutta
//! timestepping schemes for oscillatory problems.
//!
//! Exit codes: 0 success, 2 validation/usage, 3 infeasible or diverged,
//! 4 I/O failure.

mod artifacts;
mod bench;
mod config;
mod inspect;
mod limits;
mod map;
mod optimize;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use rkamp_core::maps::MapKind;
use rkamp_core::schemes::{Registry, SchemeEntry};
use rkamp_core::{Error, Result};

#[derive(Parser)]
#[command(
    name = "rkamp",
    version,
    about = "Runge-Kutta amplification-factor analysis, optimization and benchmarking"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print coefficients, low-storage form and stability classification
    Inspect {
        /// Scheme names; all registry schemes when omitted
        names: Vec<String>,
        /// Extra scheme file to load into the registry
        #[arg(long)]
        schemes: Option<PathBuf>,
    },
    /// Render complex-plane error maps (CSV + PGM, plus a winner map for
    /// two or more schemes)
    Map {
        names: Vec<String>,
        #[arg(long)]
        schemes: Option<PathBuf>,
        /// Grid resolution <nx>x<ny>
        #[arg(long, default_value = "200x200")]
        grid: String,
        /// Plane bounds re0,re1,im0,im1 (units of omega*dt)
        #[arg(long, default_value = "0,4,-1,1")]
        region: String,
        /// Error kind: phase or amp
        #[arg(long, default_value = "phase")]
        kind: String,
        /// Cost-rescale every scheme to 4-stage-equivalent effort
        #[arg(long)]
        rescaled: bool,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Tabulate stability and accuracy limits as CSV
    Limits {
        names: Vec<String>,
        #[arg(long)]
        schemes: Option<PathBuf>,
        /// Accuracy targets, comma separated
        #[arg(long, default_value = "1e-3,1e-4,1e-5")]
        delta: String,
        #[arg(long)]
        rescaled: bool,
        /// Output file; stdout when omitted
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Optimize free coefficients per a config file and append the result
    /// to a scheme file
    Optimize {
        #[arg(long)]
        config: PathBuf,
        /// Scheme file to append to (created if missing)
        #[arg(long, default_value = "optimized.txt")]
        out: PathBuf,
    },
    /// Run benchmark sweeps per a config file, emitting CSV
    Bench {
        #[arg(long)]
        config: PathBuf,
        /// Output file; stdout when omitted
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn load_registry(extra: Option<&PathBuf>) -> Result<Registry> {
    let mut reg = Registry::builtin();
    if let Some(path) = extra {
        reg.load_file(path)?;
    }
    Ok(reg)
}

fn select<'r>(reg: &'r Registry, names: &[String]) -> Result<Vec<&'r SchemeEntry>> {
    if names.is_empty() {
        Ok(reg.entries().iter().collect())
    } else {
        names.iter().map(|n| reg.get(n)).collect()
    }
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => artifacts::write_atomic(path, text.as_bytes()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.cmd {
        Cmd::Inspect { names, schemes } => {
            let reg = load_registry(schemes.as_ref())?;
            let entries = select(&reg, &names)?;
            print!("{}", inspect::report(&entries)?);
            Ok(0)
        }
        Cmd::Map {
            names,
            schemes,
            grid,
            region,
            kind,
            rescaled,
            out,
        } => {
            let reg = load_registry(schemes.as_ref())?;
            let entries = select(&reg, &names)?;
            let (nx, ny) = config::parse_grid(&grid)?;
            let bounds = config::parse_region(&region)?;
            let kind = match kind.as_str() {
                "phase" => MapKind::Phase,
                "amp" => MapKind::Amplification,
                other => {
                    return Err(Error::Validation {
                        name: "kind".into(),
                        msg: format!("expected phase or amp, got '{other}'"),
                    })
                }
            };
            let req = map::MapRequest {
                grid: map::default_grid(nx, ny, bounds),
                kind,
                rescaled,
                out_dir: out,
            };
            for path in map::run(&entries, &req)? {
                println!("{}", path.display());
            }
            Ok(0)
        }
        Cmd::Limits {
            names,
            schemes,
            delta,
            rescaled,
            out,
        } => {
            let reg = load_registry(schemes.as_ref())?;
            let entries = select(&reg, &names)?;
            let deltas = config::parse_f64_list("delta", &delta)?;
            let table = limits::table(&entries, &deltas, rescaled)?;
            emit(out.as_ref(), &table)?;
            Ok(0)
        }
        Cmd::Optimize { config, out } => {
            let cfg = config::Config::load(&config)?;
            print!("{}", optimize::run(&cfg, &out)?);
            Ok(0)
        }
        Cmd::Bench { config, out } => {
            let cfg = config::Config::load(&config)?;
            let outcome = bench::run(&cfg)?;
            emit(out.as_ref(), &outcome.csv)?;
            if outcome.all_failed {
                eprintln!("rkamp: every benchmark cell diverged");
                Ok(3)
            } else {
                Ok(0)
            }
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Infeasible(_) | Error::Diverged => 3,
        Error::Io(_) => 4,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("rkamp: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
