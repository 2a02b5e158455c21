//! `rkamp optimize`: read an optimization spec from a config file, run the
//! search, and append the converged scheme to a scheme file together with a
//! provenance comment (date-free, so reruns are byte-identical).

use std::fmt::Write as _;
use std::path::Path;

use rkamp_core::optimizer::{optimize, MetricKind, OptimizationSpec, Region};
use rkamp_core::schemes::{format_scheme, RKScheme};
use rkamp_core::{Error, Result};

use crate::artifacts::write_atomic;
use crate::config::Config;

fn bad(key: &str, msg: impl Into<String>) -> Error {
    Error::Validation {
        name: key.into(),
        msg: msg.into(),
    }
}

/// Angles accept plain radians or the forms `pi/6`, `-pi/6`, `pi`.
fn parse_angle(key: &str, v: &str) -> Result<f64> {
    let (sign, body) = match v.strip_prefix('-') {
        Some(rest) => (-1.0, rest.trim()),
        None => (1.0, v),
    };
    if let Some(rest) = body.strip_prefix("pi") {
        let rest = rest.trim();
        let mag = if rest.is_empty() {
            std::f64::consts::PI
        } else if let Some(den) = rest.strip_prefix('/') {
            let d: f64 = den
                .trim()
                .parse()
                .map_err(|_| bad(key, format!("cannot parse angle '{v}'")))?;
            std::f64::consts::PI / d
        } else {
            return Err(bad(key, format!("cannot parse angle '{v}'")));
        };
        return Ok(sign * mag);
    }
    body.parse::<f64>()
        .map(|x| sign * x)
        .map_err(|_| bad(key, format!("cannot parse angle '{v}'")))
}

pub fn spec_from_config(cfg: &Config) -> Result<OptimizationSpec> {
    let name = cfg.require("name")?.to_string();
    let stages = cfg.require_usize("stages")?;
    let order = cfg.get_usize("order", 4)?;
    let eta = cfg.require_f64("eta")?;
    let region = match cfg.require("region")? {
        "rectangle" => Region::Rectangle {
            eta,
            alpha1: cfg.get_f64("alpha1", 0.0)?,
            alpha2: cfg.get_f64("alpha2", 0.0)?,
        },
        "sector" => Region::Sector {
            eta,
            beta1: parse_angle("beta1", cfg.require("beta1")?)?,
            beta2: parse_angle("beta2", cfg.require("beta2")?)?,
        },
        other => return Err(bad("region", format!("unknown region shape '{other}'"))),
    };
    let mut spec = OptimizationSpec::new(name, stages, order, region);
    spec.metric = match cfg.get("metric").unwrap_or("amp") {
        "amp" | "e" => MetricKind::AmplificationDiff,
        "freq" | "E" => MetricKind::FrequencyDiff,
        other => return Err(bad("metric", format!("unknown metric '{other}' (amp|freq)"))),
    };
    spec.stability_floor = cfg.get_f64("stability_floor", 0.0)?;
    spec.restarts = cfg.get_usize("restarts", 10)?;
    spec.n_radial = cfg.get_usize("n_radial", 64)?;
    spec.n_angular = cfg.get_usize("n_angular", 64)?;
    spec.validate()?;
    Ok(spec)
}

fn region_echo(r: &Region) -> String {
    match *r {
        Region::Rectangle { eta, alpha1, alpha2 } => {
            format!("rectangle eta={eta} alpha1={alpha1} alpha2={alpha2}")
        }
        Region::Sector { eta, beta1, beta2 } => {
            format!("sector eta={eta} beta1={beta1} beta2={beta2}")
        }
    }
}

/// Run the optimization and append the result to `scheme_file`.  Returns a
/// report for stdout.
pub fn run(cfg: &Config, scheme_file: &Path) -> Result<String> {
    let spec = spec_from_config(cfg)?;
    let seed = RKScheme::maximal(spec.stages);
    let res = optimize(&spec, &seed)?;

    let metric_name = match spec.metric {
        MetricKind::AmplificationDiff => "amp",
        MetricKind::FrequencyDiff => "freq",
    };
    let mut block = String::new();
    let _ = writeln!(
        block,
        "# optimized: stages={} order={} {} metric={} floor={}",
        spec.stages,
        spec.order,
        region_echo(&spec.region),
        metric_name,
        spec.stability_floor
    );
    let _ = writeln!(
        block,
        "# result: metric_value={} eta_s={} growth_sign={}",
        res.metric_value, res.eta_s_achieved, res.eq_sign_value
    );
    block.push_str(&format_scheme(&res.scheme));

    let mut text = match std::fs::read_to_string(scheme_file) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => String::new(),
        Err(e) => return Err(e.into()),
    };
    if !text.is_empty() && !text.ends_with('\n') {
        text.push('\n');
    }
    text.push_str(&block);
    write_atomic(scheme_file, text.as_bytes())?;

    let mut report = String::new();
    let _ = writeln!(report, "converged: {}", res.converged);
    let _ = writeln!(report, "iterations: {}", res.iterations);
    let _ = writeln!(report, "metric_value: {}", res.metric_value);
    let _ = writeln!(report, "eta_s: {}", res.eta_s_achieved);
    let _ = writeln!(report, "growth_sign: {}", res.eq_sign_value);
    let _ = writeln!(report, "appended '{}' to {}", res.scheme.name(), scheme_file.display());
    Ok(report)
}
