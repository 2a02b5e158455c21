//! `rkamp inspect`: human-readable report on registry schemes.

use std::fmt::Write as _;

use rkamp_core::schemes::{coeffs_to_betas, RKScheme, SchemeEntry};
use rkamp_core::spectral::{small_dt_leading, Analyzer, StabilityClass};
use rkamp_core::Result;

fn push_scheme(out: &mut String, s: &RKScheme) {
    let _ = writeln!(out, "scheme {}: {} stages, order {}", s.name(), s.stages(), s.order());
    let c: Vec<String> = s.coeffs().iter().map(|v| v.to_string()).collect();
    let _ = writeln!(out, "  c      = {}", c.join(" "));
    match coeffs_to_betas(s) {
        Ok(ls) => {
            let b: Vec<String> = ls.betas.iter().map(|v| v.to_string()).collect();
            let _ = writeln!(out, "  beta   = {}", b.join(" "));
        }
        Err(e) => {
            let _ = writeln!(out, "  beta   = (none: {e})");
        }
    }
    let (lead, power) = small_dt_leading(s.stages(), s.order(), s.coeffs());
    let verdict = match rkamp_core::spectral::small_dt_stability_sign(
        s.stages(),
        s.order(),
        s.coeffs(),
    ) {
        StabilityClass::Stable => "stable for small real steps",
        StabilityClass::Unstable => "unstable at arbitrarily small real steps",
        StabilityClass::Marginal => "marginal (leading growth terms vanish)",
    };
    let _ = writeln!(
        out,
        "  growth = {lead} * x^{power} as x -> 0: {verdict}"
    );
}

pub fn report(entries: &[&SchemeEntry]) -> Result<String> {
    let mut out = String::new();
    for e in entries {
        match e {
            SchemeEntry::Single(s) => push_scheme(&mut out, s),
            SchemeEntry::Composite(c) => {
                let _ = writeln!(
                    out,
                    "scheme {}: composite {} + {}, {} stages per double step, order {}",
                    c.name(),
                    c.first().name(),
                    c.second().name(),
                    c.total_stages(),
                    c.order()
                );
                push_scheme(&mut out, c.first());
                push_scheme(&mut out, c.second());
            }
        }
        let an = Analyzer::new(e, false);
        let _ = writeln!(out, "  eta_s  = {}", an.stability_limit());
        out.push('\n');
    }
    Ok(out)
}
