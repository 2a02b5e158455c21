//! `rkamp bench`: benchmark sweeps over schemes and time steps, emitting a
//! CSV with both the time step and the effort of every cell.

use std::fmt::Write as _;

use rkamp_core::schemes::{Registry, SchemeEntry};
use rkamp_core::wave1d::{sweep, BenchResult, StencilSet, WaveProblem, DEFAULT_FILTER_SIGMA};
use rkamp_core::{Error, Result};

use crate::config::Config;

pub struct BenchOutcome {
    pub csv: String,
    /// True when every cell diverged (nonzero exit).
    pub all_failed: bool,
}

pub fn csv_header() -> &'static str {
    "scheme, dt, cfl, error, effort, stable"
}

fn push_row(out: &mut String, r: &BenchResult) {
    let _ = writeln!(
        out,
        "{}, {}, {}, {}, {}, {}",
        r.scheme,
        r.dt,
        r.cfl,
        r.error,
        r.effort,
        r.stable()
    );
}

pub fn run(cfg: &Config) -> Result<BenchOutcome> {
    let mut reg = Registry::builtin();
    if let Some(f) = cfg.get("scheme_file") {
        reg.load_file(std::path::Path::new(f))?;
    }
    let mut set = StencilSet::builtin();
    if let Some(f) = cfg.get("stencil_file") {
        set.load_file(std::path::Path::new(f))?;
    }

    let ppw = cfg.require_usize("ppw")?;
    let problem = match cfg.get("damping") {
        Some("none") => WaveProblem::undamped(ppw)?,
        Some(other) if other != "default" => {
            return Err(Error::Validation {
                name: "damping".into(),
                msg: format!("expected 'default' or 'none', got '{other}'"),
            })
        }
        _ => WaveProblem::default_benchmark(ppw)?,
    };
    let stencil = set.stencil(cfg.require("stencil")?)?;
    let filter = match cfg.get("filter") {
        None | Some("none") => None,
        Some(name) => Some((
            set.filter(name)?,
            cfg.get_f64("sigma", DEFAULT_FILTER_SIGMA)?,
        )),
    };

    let names = cfg.get_list("schemes");
    if names.is_empty() {
        return Err(Error::Validation {
            name: "schemes".into(),
            msg: "need at least one scheme".into(),
        });
    }
    let entries: Vec<&SchemeEntry> = names
        .iter()
        .map(|n| reg.get(n))
        .collect::<Result<_>>()?;

    // time steps as CFL numbers directly, or as dt values (CFL = dt * PPW)
    let mut cfls = cfg.get_f64_list("cfl")?;
    for dt in cfg.get_f64_list("dt")? {
        cfls.push(dt * ppw as f64);
    }
    for &c in &cfls {
        if !(c > 0.0) {
            return Err(Error::Validation {
                name: "cfl".into(),
                msg: format!("time steps must be positive, got {c}"),
            });
        }
    }

    let mut csv = String::from(csv_header());
    csv.push('\n');
    if cfls.is_empty() {
        return Ok(BenchOutcome {
            csv,
            all_failed: false,
        });
    }
    let results = sweep(&problem, &entries, &cfls, stencil, filter)?;
    for r in &results {
        push_row(&mut csv, r);
    }
    let all_failed = results.iter().all(|r| !r.stable());
    Ok(BenchOutcome { csv, all_failed })
}
