//! `rkamp map`: per-scheme error heatmaps over a complex-plane region, plus
//! a winner map when several schemes are given.

use std::path::PathBuf;

use rkamp_core::maps::{error_map, winner_map, GridSpec, MapKind};
use rkamp_core::schemes::SchemeEntry;
use rkamp_core::spectral::Analyzer;
use rkamp_core::{Error, Result};

use crate::artifacts::{join_names, write_atomic};

pub struct MapRequest {
    pub grid: GridSpec,
    pub kind: MapKind,
    pub rescaled: bool,
    pub out_dir: PathBuf,
}

/// Renders everything in memory before touching the filesystem, then writes
/// each artifact atomically.  Returns the written paths in emission order.
pub fn run(entries: &[&SchemeEntry], req: &MapRequest) -> Result<Vec<PathBuf>> {
    if entries.is_empty() {
        return Err(Error::Validation {
            name: "map".into(),
            msg: "need at least one scheme".into(),
        });
    }
    req.grid.validate()?;
    let analyzers: Vec<Analyzer> = entries
        .iter()
        .map(|e| Analyzer::new(e, req.rescaled))
        .collect();

    let tag = format!(
        "{}_{}x{}",
        req.kind.label(),
        req.grid.nx,
        req.grid.ny
    );
    let mut files: Vec<(PathBuf, Vec<u8>)> = Vec::new();
    for (e, an) in entries.iter().zip(&analyzers) {
        let m = error_map(an, &req.grid, req.kind)?;
        let base = format!("{}_{tag}", e.name());
        let mut csv = Vec::new();
        m.to_csv(&mut csv)?;
        files.push((req.out_dir.join(format!("{base}.csv")), csv));
        let mut pgm = Vec::new();
        m.to_pgm(&mut pgm)?;
        files.push((req.out_dir.join(format!("{base}.pgm")), pgm));
    }
    if entries.len() >= 2 {
        let w = winner_map(&analyzers, &req.grid, req.kind)?;
        let names: Vec<String> = entries.iter().map(|e| e.name().to_string()).collect();
        let base = format!("winner_{}_{tag}", join_names(&names));
        let mut csv = Vec::new();
        w.to_csv(&mut csv)?;
        files.push((req.out_dir.join(format!("{base}.csv")), csv));
        let mut ppm = Vec::new();
        w.to_ppm(&mut ppm)?;
        files.push((req.out_dir.join(format!("{base}.ppm")), ppm));
    }

    let mut written = Vec::with_capacity(files.len());
    for (path, bytes) in files {
        write_atomic(&path, &bytes)?;
        written.push(path);
    }
    Ok(written)
}

pub fn default_grid(nx: usize, ny: usize, region: (f64, f64, f64, f64)) -> GridSpec {
    GridSpec {
        re: (region.0, region.1),
        im: (region.2, region.3),
        nx,
        ny,
    }
}
