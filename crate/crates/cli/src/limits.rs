//! `rkamp limits`: CSV table of stability and accuracy limits, plain or
//! cost-rescaled.

use std::fmt::Write as _;

use rkamp_core::schemes::SchemeEntry;
use rkamp_core::spectral::Analyzer;
use rkamp_core::{Error, Result};

pub fn table(entries: &[&SchemeEntry], deltas: &[f64], rescaled: bool) -> Result<String> {
    if entries.is_empty() {
        return Err(Error::Validation {
            name: "limits".into(),
            msg: "need at least one scheme".into(),
        });
    }
    for &d in deltas {
        if !(d > 0.0) {
            return Err(Error::Validation {
                name: "delta".into(),
                msg: format!("accuracy target {d} must be positive"),
            });
        }
    }
    let sym = if rescaled { "lambda" } else { "eta" };
    let mut out = String::new();
    let _ = write!(out, "scheme, {sym}_s");
    for &d in deltas {
        let _ = write!(out, ", {sym}_{d}, {sym}hat_{d}");
    }
    out.push('\n');
    for e in entries {
        let an = Analyzer::new(e, rescaled);
        let _ = write!(out, "{}, {}", e.name(), an.stability_limit());
        for &d in deltas {
            let _ = write!(
                out,
                ", {}, {}",
                an.accuracy_limit(d, false),
                an.accuracy_limit(d, true)
            );
        }
        out.push('\n');
    }
    Ok(out)
}
