//! `key = value` config files with `#` comments, shared by the optimize and
//! bench subcommands.  Later assignments override earlier ones.

use rkamp_core::{Error, Result};

#[derive(Debug, Default)]
pub struct Config {
    pairs: Vec<(String, String)>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| Error::Parse {
                line: lineno + 1,
                msg: format!("expected 'key = value', got '{line}'"),
            })?;
            let (k, v) = (k.trim(), v.trim());
            if k.is_empty() || v.is_empty() {
                return Err(Error::Parse {
                    line: lineno + 1,
                    msg: "empty key or value".into(),
                });
            }
            pairs.push((k.to_string(), v.to_string()));
        }
        Ok(Self { pairs })
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.pairs
            .iter()
            .rev()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn require(&self, key: &str) -> Result<&str> {
        self.get(key).ok_or_else(|| Error::Validation {
            name: key.into(),
            msg: "missing required config key".into(),
        })
    }

    pub fn get_f64(&self, key: &str, default: f64) -> Result<f64> {
        match self.get(key) {
            None => Ok(default),
            Some(v) => parse_num(key, v),
        }
    }

    pub fn require_f64(&self, key: &str) -> Result<f64> {
        parse_num(key, self.require(key)?)
    }

    pub fn get_usize(&self, key: &str, default: usize) -> Result<usize> {
        match self.get(key) {
            None => Ok(default),
            Some(v) => parse_num(key, v),
        }
    }

    pub fn require_usize(&self, key: &str) -> Result<usize> {
        parse_num(key, self.require(key)?)
    }

    /// Comma-separated list value; empty string means empty list.
    pub fn get_list(&self, key: &str) -> Vec<String> {
        match self.get(key) {
            None => Vec::new(),
            Some(v) => v
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(String::from)
                .collect(),
        }
    }

    pub fn get_f64_list(&self, key: &str) -> Result<Vec<f64>> {
        self.get_list(key)
            .iter()
            .map(|s| parse_num(key, s))
            .collect()
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse().map_err(|_| Error::Validation {
        name: key.into(),
        msg: format!("cannot parse '{v}'"),
    })
}

/// Parse "<nx>x<ny>" grid dimensions.
pub fn parse_grid(s: &str) -> Result<(usize, usize)> {
    let bad = || Error::Validation {
        name: "grid".into(),
        msg: format!("expected <nx>x<ny>, got '{s}'"),
    };
    let (a, b) = s.split_once(['x', 'X']).ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

/// Parse "re0,re1,im0,im1" region bounds.
pub fn parse_region(s: &str) -> Result<(f64, f64, f64, f64)> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let bad = || Error::Validation {
        name: "region".into(),
        msg: format!("expected re0,re1,im0,im1, got '{s}'"),
    };
    if parts.len() != 4 {
        return Err(bad());
    }
    let mut v = [0.0; 4];
    for (i, p) in parts.iter().enumerate() {
        v[i] = p.parse().map_err(|_| bad())?;
    }
    Ok((v[0], v[1], v[2], v[3]))
}

/// Parse a comma-separated float list from a flag value.
pub fn parse_f64_list(name: &str, s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse().map_err(|_| Error::Validation {
                name: name.into(),
                msg: format!("cannot parse '{t}'"),
            })
        })
        .collect()
}
