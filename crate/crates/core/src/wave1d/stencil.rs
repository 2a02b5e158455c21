//! Central antisymmetric first-derivative stencils on periodic grids.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::wave1d::filter::SpatialFilter;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StencilFamily {
    /// Exact on polynomials up to degree 2w.
    Maximal,
    /// Dispersion-relation-preserving / transcribed optimized coefficients.
    Drp,
}

#[derive(Debug, Clone)]
pub struct Stencil {
    name: String,
    halfwidth: usize,
    order: usize,
    family: StencilFamily,
    /// d_1..d_w; d_{-j} = -d_j, d_0 = 0.
    coeffs: Vec<f64>,
}

impl Stencil {
    pub fn new(
        name: impl Into<String>,
        order: usize,
        family: StencilFamily,
        coeffs: Vec<f64>,
    ) -> Result<Self> {
        let name = name.into();
        let w = coeffs.len();
        if w == 0 {
            return Err(Error::Validation {
                name,
                msg: "stencil needs at least one coefficient".into(),
            });
        }
        // first-order consistency: 2 * sum j d_j = 1
        let s: f64 = coeffs.iter().enumerate().map(|(i, &d)| (i + 1) as f64 * d).sum();
        if (2.0 * s - 1.0).abs() > 1e-9 {
            return Err(Error::Validation {
                name,
                msg: format!("inconsistent first derivative: 2*sum(j d_j) = {}", 2.0 * s),
            });
        }
        Ok(Self {
            name,
            halfwidth: w,
            order,
            family,
            coeffs,
        })
    }

    /// Maximal order central stencil of half-width w:
    /// d_j = (-1)^{j+1} (w!)^2 / (j (w-j)! (w+j)!), order 2w.
    pub fn maximal(w: usize) -> Self {
        let mut coeffs = Vec::with_capacity(w);
        for j in 1..=w {
            // (w!)^2 / ((w-j)! (w+j)!) = prod_{i=1..j} (w-j+i)/(w+i)
            let mut ratio = 1.0_f64;
            for i in 1..=j {
                ratio *= (w - j + i) as f64 / (w + i) as f64;
            }
            let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
            coeffs.push(sign * ratio / j as f64);
        }
        Self::new(format!("max{}", 2 * w), 2 * w, StencilFamily::Maximal, coeffs)
            .expect("maximal stencil is consistent")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn halfwidth(&self) -> usize {
        self.halfwidth
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn family(&self) -> StencilFamily {
        self.family
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Modified wavenumber: kbar dx = 2 sum d_j sin(j k dx).
    pub fn modified_wavenumber(&self, kdx: f64) -> f64 {
        2.0 * self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, &d)| d * ((i + 1) as f64 * kdx).sin())
            .sum::<f64>()
    }

    /// Periodic first derivative: out_i = sum_j d_j (u_{i+j} - u_{i-j}) / dx.
    pub fn derivative_into(&self, field: &[f64], dx: f64, out: &mut [f64]) -> Result<()> {
        let n = field.len();
        let w = self.halfwidth;
        if n < 2 * w + 1 {
            return Err(Error::Size { len: n, halfwidth: w });
        }
        assert_eq!(out.len(), n);
        let inv = 1.0 / dx;
        // wrapped edges
        for i in 0..w.min(n) {
            let mut s = 0.0;
            for (jm1, &d) in self.coeffs.iter().enumerate() {
                let j = jm1 + 1;
                s += d * (field[(i + j) % n] - field[(i + n - j) % n]);
            }
            out[i] = s * inv;
        }
        for i in n - w..n {
            let mut s = 0.0;
            for (jm1, &d) in self.coeffs.iter().enumerate() {
                let j = jm1 + 1;
                s += d * (field[(i + j) % n] - field[(i + n - j) % n]);
            }
            out[i] = s * inv;
        }
        // interior, no wrap
        for i in w..n - w {
            let mut s = 0.0;
            for (jm1, &d) in self.coeffs.iter().enumerate() {
                let j = jm1 + 1;
                s += d * (field[i + j] - field[i - j]);
            }
            out[i] = s * inv;
        }
        Ok(())
    }

    pub fn derivative(&self, field: &[f64], dx: f64) -> Result<Vec<f64>> {
        let mut out = vec![0.0; field.len()];
        self.derivative_into(field, dx, &mut out)?;
        Ok(out)
    }
}

/// Named stencils and filters: maximal stencils max2..max18, the bundled
/// DRP stencil, standard filters F2..F12 and the sharp-cutoff F16.4.
#[derive(Debug)]
pub struct StencilSet {
    stencils: Vec<Stencil>,
    filters: Vec<SpatialFilter>,
    sindex: HashMap<String, usize>,
    findex: HashMap<String, usize>,
}

const BUNDLED: &str = include_str!("../../data/stencils.txt");

impl StencilSet {
    pub fn builtin() -> Self {
        let mut set = Self {
            stencils: Vec::new(),
            filters: Vec::new(),
            sindex: HashMap::new(),
            findex: HashMap::new(),
        };
        for w in 1..=9 {
            set.add_stencil(Stencil::maximal(w)).unwrap();
        }
        for m in 1..=6 {
            set.add_filter(SpatialFilter::standard(2 * m)).unwrap();
        }
        set.add_filter(SpatialFilter::sharp16_4()).unwrap();
        set.parse_into(BUNDLED).expect("bundled stencil file is valid");
        set
    }

    pub fn add_stencil(&mut self, s: Stencil) -> Result<()> {
        if self.sindex.contains_key(s.name()) {
            return Err(Error::Validation {
                name: s.name().into(),
                msg: "duplicate stencil name".into(),
            });
        }
        self.sindex.insert(s.name().into(), self.stencils.len());
        self.stencils.push(s);
        Ok(())
    }

    pub fn add_filter(&mut self, f: SpatialFilter) -> Result<()> {
        if self.findex.contains_key(f.name()) {
            return Err(Error::Validation {
                name: f.name().into(),
                msg: "duplicate filter name".into(),
            });
        }
        self.findex.insert(f.name().into(), self.filters.len());
        self.filters.push(f);
        Ok(())
    }

    pub fn stencil(&self, name: &str) -> Result<&Stencil> {
        self.sindex
            .get(name)
            .map(|&i| &self.stencils[i])
            .ok_or_else(|| Error::UnknownStencil(name.into()))
    }

    pub fn filter(&self, name: &str) -> Result<&SpatialFilter> {
        self.findex
            .get(name)
            .map(|&i| &self.filters[i])
            .ok_or_else(|| Error::UnknownStencil(name.into()))
    }

    pub fn stencil_names(&self) -> impl Iterator<Item = &str> {
        self.stencils.iter().map(|s| s.name())
    }

    pub fn filter_names(&self) -> impl Iterator<Item = &str> {
        self.filters.iter().map(|f| f.name())
    }

    pub fn load_file(&mut self, path: &std::path::Path) -> Result<()> {
        let text = std::fs::read_to_string(path)?;
        self.parse_into(&text)
    }

    /// Same line grammar as scheme files:
    /// `stencil <name> halfwidth=<w> order=<q>` with `d <j> <v>` lines, or
    /// `filter <name> halfwidth=<w>` with `f <j> <v>` lines, each closed by
    /// `end`.
    pub fn parse_into(&mut self, text: &str) -> Result<()> {
        enum Block {
            Stencil { name: String, w: usize, order: usize, d: Vec<(usize, f64)> },
            Filter { name: String, w: usize, f: Vec<(usize, f64)> },
        }
        let mut block: Option<Block> = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let lineno = lineno + 1;
            let perr = |msg: String| Error::Parse { line: lineno, msg };
            let tok: Vec<&str> = line.split_whitespace().collect();
            match tok[0] {
                "stencil" => {
                    if block.is_some() {
                        return Err(perr("nested block before 'end'".into()));
                    }
                    if tok.len() != 4 {
                        return Err(perr("expected: stencil <name> halfwidth=<w> order=<q>".into()));
                    }
                    block = Some(Block::Stencil {
                        name: tok[1].into(),
                        w: kv_usize(tok[2], "halfwidth", lineno)?,
                        order: kv_usize(tok[3], "order", lineno)?,
                        d: Vec::new(),
                    });
                }
                "filter" => {
                    if block.is_some() {
                        return Err(perr("nested block before 'end'".into()));
                    }
                    if tok.len() != 3 {
                        return Err(perr("expected: filter <name> halfwidth=<w>".into()));
                    }
                    block = Some(Block::Filter {
                        name: tok[1].into(),
                        w: kv_usize(tok[2], "halfwidth", lineno)?,
                        f: Vec::new(),
                    });
                }
                "d" | "f" => {
                    if tok.len() != 3 {
                        return Err(perr(format!("expected: {} <j> <value>", tok[0])));
                    }
                    let j: usize = tok[1]
                        .parse()
                        .map_err(|_| perr(format!("bad index '{}'", tok[1])))?;
                    let v: f64 = tok[2]
                        .parse()
                        .map_err(|_| perr(format!("bad value '{}'", tok[2])))?;
                    match (&mut block, tok[0]) {
                        (Some(Block::Stencil { d, .. }), "d") => d.push((j, v)),
                        (Some(Block::Filter { f, .. }), "f") => f.push((j, v)),
                        _ => return Err(perr(format!("'{}' line outside its block", tok[0]))),
                    }
                }
                "end" => match block.take() {
                    Some(Block::Stencil { name, w, order, d }) => {
                        let mut coeffs = vec![None; w];
                        for (j, v) in d {
                            if j == 0 || j > w {
                                return Err(perr(format!("d index {j} out of 1..={w}")));
                            }
                            coeffs[j - 1] = Some(v);
                        }
                        let coeffs: Vec<f64> = coeffs
                            .into_iter()
                            .enumerate()
                            .map(|(i, v)| {
                                v.ok_or_else(|| Error::Parse {
                                    line: lineno,
                                    msg: format!("missing d {} for '{name}'", i + 1),
                                })
                            })
                            .collect::<Result<_>>()?;
                        self.add_stencil(Stencil::new(name, order, StencilFamily::Drp, coeffs)?)?;
                    }
                    Some(Block::Filter { name, w, f }) => {
                        let mut coeffs = vec![None; w + 1];
                        for (j, v) in f {
                            if j > w {
                                return Err(perr(format!("f index {j} out of 0..={w}")));
                            }
                            coeffs[j] = Some(v);
                        }
                        let coeffs: Vec<f64> = coeffs
                            .into_iter()
                            .enumerate()
                            .map(|(i, v)| {
                                v.ok_or_else(|| Error::Parse {
                                    line: lineno,
                                    msg: format!("missing f {i} for '{name}'"),
                                })
                            })
                            .collect::<Result<_>>()?;
                        self.add_filter(SpatialFilter::from_coeffs(name, coeffs)?)?;
                    }
                    None => return Err(perr("'end' without a block".into())),
                },
                other => return Err(perr(format!("unknown directive '{other}'"))),
            }
        }
        if block.is_some() {
            return Err(Error::Parse {
                line: 0,
                msg: "unterminated block".into(),
            });
        }
        Ok(())
    }
}

fn kv_usize(token: &str, key: &str, line: usize) -> Result<usize> {
    match token.split_once('=') {
        Some((k, v)) if k == key => v.parse().map_err(|_| Error::Parse {
            line,
            msg: format!("bad {key} value '{v}'"),
        }),
        _ => Err(Error::Parse {
            line,
            msg: format!("expected {key}=<value>, got '{token}'"),
        }),
    }
}
