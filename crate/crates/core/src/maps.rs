//! Complex-plane error maps and multi-scheme winner maps, with CSV, PGM and
//! PPM serialization.  Output is byte-deterministic: floats are written with
//! Rust's shortest round-trip formatting and grids are traversed in a fixed
//! order.

use std::io::Write;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::Analyzer;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapKind {
    Phase,
    Amplification,
}

impl MapKind {
    pub fn label(&self) -> &'static str {
        match self {
            MapKind::Phase => "phase",
            MapKind::Amplification => "amp",
        }
    }
}

#[derive(Debug, Clone)]
pub struct GridSpec {
    pub re: (f64, f64),
    pub im: (f64, f64),
    pub nx: usize,
    pub ny: usize,
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        if self.nx < 2 || self.ny < 2 {
            return Err(Error::Grid(format!(
                "grid {}x{} too small (need at least 2x2)",
                self.nx, self.ny
            )));
        }
        if !(self.re.0 < self.re.1) || !(self.im.0 < self.im.1) {
            return Err(Error::Grid(format!(
                "inverted or empty ranges [{}, {}] x [{}, {}]",
                self.re.0, self.re.1, self.im.0, self.im.1
            )));
        }
        Ok(())
    }

    pub fn point(&self, ix: usize, iy: usize) -> Complex64 {
        let fx = ix as f64 / (self.nx - 1) as f64;
        let fy = iy as f64 / (self.ny - 1) as f64;
        Complex64::new(
            self.re.0 + fx * (self.re.1 - self.re.0),
            self.im.0 + fy * (self.im.1 - self.im.0),
        )
    }
}

/// Per-point error field of one scheme. Values are finite or infinite
/// (degenerate r = 0), never NaN; the z = 0 grid point gets the consistent
/// limit 0.
#[derive(Debug, Clone)]
pub struct ErrorMap {
    pub grid: GridSpec,
    pub kind: MapKind,
    /// Row-major, index iy * nx + ix, im ascending.
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AccuracyClass {
    Better1e3 = 0,
    Better1e2 = 1,
    Worse = 2,
}

/// Argmin scheme index per grid point, with accuracy classification of the
/// winning error.  Ties break to the lowest index.
#[derive(Debug, Clone)]
pub struct WinnerMap {
    pub grid: GridSpec,
    pub kind: MapKind,
    pub winner: Vec<usize>,
    pub class: Vec<AccuracyClass>,
    pub best: Vec<f64>,
}

fn point_value(an: &Analyzer, z: Complex64, kind: MapKind) -> f64 {
    let v = match kind {
        MapKind::Amplification => an.amp_error(z),
        MapKind::Phase => match an.phase_error(z) {
            Ok(v) => v,
            Err(Error::UndefinedAtZero) => 0.0,
            Err(_) => f64::INFINITY,
        },
    };
    if v.is_nan() {
        f64::INFINITY
    } else {
        v
    }
}

pub fn error_map(an: &Analyzer, grid: &GridSpec, kind: MapKind) -> Result<ErrorMap> {
    grid.validate()?;
    let mut values = Vec::with_capacity(grid.nx * grid.ny);
    for iy in 0..grid.ny {
        for ix in 0..grid.nx {
            values.push(point_value(an, grid.point(ix, iy), kind));
        }
    }
    Ok(ErrorMap {
        grid: grid.clone(),
        kind,
        values,
    })
}

pub fn winner_map(ans: &[Analyzer], grid: &GridSpec, kind: MapKind) -> Result<WinnerMap> {
    grid.validate()?;
    assert!(ans.len() >= 2, "winner map needs at least two contestants");
    let n = grid.nx * grid.ny;
    let mut winner = Vec::with_capacity(n);
    let mut class = Vec::with_capacity(n);
    let mut best = Vec::with_capacity(n);
    for iy in 0..grid.ny {
        for ix in 0..grid.nx {
            let z = grid.point(ix, iy);
            let mut wi = 0usize;
            let mut wv = f64::INFINITY;
            for (i, an) in ans.iter().enumerate() {
                let v = point_value(an, z, kind);
                if v < wv {
                    wv = v;
                    wi = i;
                }
            }
            winner.push(wi);
            class.push(if wv < 1e-3 {
                AccuracyClass::Better1e3
            } else if wv < 1e-2 {
                AccuracyClass::Better1e2
            } else {
                AccuracyClass::Worse
            });
            best.push(wv);
        }
    }
    Ok(WinnerMap {
        grid: grid.clone(),
        kind,
        winner,
        class,
        best,
    })
}

impl ErrorMap {
    pub fn to_csv<W: Write>(&self, w: &mut W) -> std::io::Result<()> {
        writeln!(w, "re,im,value")?;
        for iy in 0..self.grid.ny {
            for ix in 0..self.grid.nx {
                let z = self.grid.point(ix, iy);
                writeln!(w, "{},{},{}", z.re, z.im, self.values[iy * self.grid.nx + ix])?;
            }
        }
        Ok(())
    }

    /// 8-bit grayscale PGM: log10(eps) clamped to [-6, 0], mapped to
    /// [255, 0] (accurate = bright).  Rows run from im max down to im min.
    pub fn to_pgm<W: Write>(&self, w: &mut W) -> std::io::Result<()> {
        write!(w, "P5\n{} {}\n255\n", self.grid.nx, self.grid.ny)?;
        let mut row = Vec::with_capacity(self.grid.nx);
        for iy in (0..self.grid.ny).rev() {
            row.clear();
            for ix in 0..self.grid.nx {
                row.push(gray_level(self.values[iy * self.grid.nx + ix]));
            }
            w.write_all(&row)?;
        }
        Ok(())
    }
}

fn gray_level(v: f64) -> u8 {
    let l = if v <= 0.0 { -6.0 } else { v.log10().clamp(-6.0, 0.0) };
    (-l / 6.0 * 255.0).round() as u8
}

/// Distinct base colors per contestant index (cycled beyond 8).
const PALETTE: [(u8, u8, u8); 8] = [
    (230, 60, 50),
    (50, 120, 220),
    (60, 180, 90),
    (230, 180, 40),
    (150, 90, 210),
    (60, 190, 190),
    (240, 130, 40),
    (200, 70, 160),
];

impl WinnerMap {
    pub fn to_csv<W: Write>(&self, w: &mut W) -> std::io::Result<()> {
        writeln!(w, "re,im,value,winner,class")?;
        for iy in 0..self.grid.ny {
            for ix in 0..self.grid.nx {
                let z = self.grid.point(ix, iy);
                let i = iy * self.grid.nx + ix;
                writeln!(
                    w,
                    "{},{},{},{},{}",
                    z.re, z.im, self.best[i], self.winner[i], self.class[i] as u8
                )?;
            }
        }
        Ok(())
    }

    /// Paletted PPM: hue encodes the winning scheme, brightness the accuracy
    /// class (full / dim / dark for <1e-3 / <1e-2 / worse).
    pub fn to_ppm<W: Write>(&self, w: &mut W) -> std::io::Result<()> {
        write!(w, "P6\n{} {}\n255\n", self.grid.nx, self.grid.ny)?;
        let mut row = Vec::with_capacity(3 * self.grid.nx);
        for iy in (0..self.grid.ny).rev() {
            row.clear();
            for ix in 0..self.grid.nx {
                let i = iy * self.grid.nx + ix;
                let (r, g, b) = PALETTE[self.winner[i] % PALETTE.len()];
                let scale = match self.class[i] {
                    AccuracyClass::Better1e3 => 1.0,
                    AccuracyClass::Better1e2 => 0.6,
                    AccuracyClass::Worse => 0.28,
                };
                row.push((r as f64 * scale) as u8);
                row.push((g as f64 * scale) as u8);
                row.push((b as f64 * scale) as u8);
            }
            w.write_all(&row)?;
        }
        Ok(())
    }
}
