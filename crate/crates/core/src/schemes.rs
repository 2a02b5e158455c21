//! Explicit Runge-Kutta schemes represented by their amplification
//! polynomials.
//!
//! For the linear oscillator dU/dt = -i w U an explicit p-stage scheme
//! advances one step by multiplication with
//!
//! ```text
//! r(z) = 1 + sum_{j=1..p} c_j (-i z)^j,      z = w dt,
//! ```
//!
//! which is all that matters for linear problems.  Low-storage
//! implementations (Hu, Hussaini & Manthey 1996) carry the equivalent beta
//! coefficients: c_1 = beta_p and beta_{p-j} = c_{j+1}/c_j.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// 1/j!, exact for j = 0 and built by the same product everywhere so that
/// implied coefficients subtract to exactly zero.
pub fn inv_factorial(j: usize) -> f64 {
    let mut v = 1.0_f64;
    for i in 1..=j {
        v /= i as f64;
    }
    v
}

fn order_tolerance(j: usize) -> f64 {
    // c_16 = 1/16! is near the resolution of decimal transcription; relax
    // the relative check beyond j = 12.
    if j <= 12 {
        1e-10
    } else {
        1e-6
    }
}

/// A single explicit RK scheme, as its amplification polynomial.
#[derive(Debug, Clone)]
pub struct RKScheme {
    name: String,
    order: usize,
    /// c_j for j = 1..p (index j-1).
    coeffs: Vec<f64>,
    /// d_j = c_j - 1/j!; exactly zero whenever c_j was assigned as 1/j!.
    diff: Vec<f64>,
}

impl RKScheme {
    pub fn new(name: impl Into<String>, order: usize, coeffs: Vec<f64>) -> Result<Self> {
        let name = name.into();
        let p = coeffs.len();
        let fail = |msg: String| Error::Validation {
            name: name.clone(),
            msg,
        };
        if p == 0 {
            return Err(fail("scheme must have at least one stage".into()));
        }
        if order < 1 || order > p {
            return Err(fail(format!("order {order} out of range 1..={p}")));
        }
        let mut fact = 1.0_f64;
        for j in 1..=order {
            fact *= j as f64;
            if (coeffs[j - 1] * fact - 1.0).abs() > order_tolerance(j) {
                return Err(fail(format!(
                    "c_{j} = {} violates the order-{order} condition c_{j} = 1/{j}!",
                    coeffs[j - 1]
                )));
            }
        }
        let diff = coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| c - inv_factorial(i + 1))
            .collect();
        Ok(Self {
            name,
            order,
            coeffs,
            diff,
        })
    }

    /// Maximal order p-stage scheme: c_j = 1/j!, order p.
    pub fn maximal(p: usize) -> Self {
        let coeffs = (1..=p).map(inv_factorial).collect();
        Self::new(format!("RK{p}"), p, coeffs).expect("maximal scheme is always valid")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn stages(&self) -> usize {
        self.coeffs.len()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// c_j - 1/j!, formed once at construction.
    pub fn diff_coeffs(&self) -> &[f64] {
        &self.diff
    }

    /// r(z) by Horner recurrence in (-i z).
    pub fn amplification(&self, z: Complex64) -> Complex64 {
        let s = Complex64::new(0.0, -1.0) * z;
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            acc = (acc + c) * s;
        }
        acc + 1.0
    }

    /// Largest q such that c_j = 1/j! for all j <= q (|c_j j! - 1| within
    /// tolerance); recomputed from the coefficients, independent of the
    /// declared order.
    pub fn order_of_accuracy(&self) -> usize {
        order_from_coeffs(&self.coeffs)
    }
}

fn order_from_coeffs(coeffs: &[f64]) -> usize {
    let mut fact = 1.0_f64;
    let mut q = 0;
    for (i, &c) in coeffs.iter().enumerate() {
        fact *= (i + 1) as f64;
        if (c * fact - 1.0).abs() > order_tolerance(i + 1) {
            break;
        }
        q = i + 1;
    }
    q
}

/// Two RK schemes applied on alternating steps; the double step advances by
/// the product r1(z) r2(z).
#[derive(Debug, Clone)]
pub struct CompositeScheme {
    name: String,
    first: RKScheme,
    second: RKScheme,
    /// Product coefficients P_k of r1 r2 = 1 + sum P_k (-iz)^k, k = 1..p1+p2.
    product: Vec<f64>,
    /// Order of the per-step effective scheme with C_k = P_k / 2^k.
    order: usize,
}

impl CompositeScheme {
    pub fn new(name: impl Into<String>, first: RKScheme, second: RKScheme) -> Self {
        let (p1, p2) = (first.stages(), second.stages());
        let a = first.coeffs();
        let b = second.coeffs();
        let mut product = vec![0.0_f64; p1 + p2];
        for k in 1..=p1 + p2 {
            let mut s = 0.0;
            // sum over i + j = k with a_0 = b_0 = 1
            for i in 0..=k {
                let ai = match i {
                    0 => 1.0,
                    _ if i <= p1 => a[i - 1],
                    _ => 0.0,
                };
                let j = k - i;
                let bj = match j {
                    0 => 1.0,
                    _ if j <= p2 => b[j - 1],
                    _ => 0.0,
                };
                s += ai * bj;
            }
            product[k - 1] = s;
        }
        let effective: Vec<f64> = product
            .iter()
            .enumerate()
            .map(|(i, &p)| p / 2f64.powi(i as i32 + 1))
            .collect();
        let order = order_from_coeffs(&effective).max(1);
        Self {
            name: name.into(),
            first,
            second,
            product,
            order,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn first(&self) -> &RKScheme {
        &self.first
    }

    pub fn second(&self) -> &RKScheme {
        &self.second
    }

    /// Total stages over the double step.
    pub fn total_stages(&self) -> usize {
        self.first.stages() + self.second.stages()
    }

    /// Coefficients P_k of the double-step polynomial r1 r2.
    pub fn product_coeffs(&self) -> &[f64] {
        &self.product
    }

    /// Per-step effective coefficients C_k = P_k / 2^k (r1 r2 advances 2 dt,
    /// so z_double = 2 z).
    pub fn effective_coeffs(&self) -> Vec<f64> {
        self.product
            .iter()
            .enumerate()
            .map(|(i, &p)| p / 2f64.powi(i as i32 + 1))
            .collect()
    }

    /// Order per step: largest q with C_k = 1/k! for k <= q.
    pub fn order(&self) -> usize {
        self.order
    }

    /// r1(z) r2(z): advancement by 2 dt.
    pub fn amplification(&self, z: Complex64) -> Complex64 {
        self.first.amplification(z) * self.second.amplification(z)
    }
}

/// Low-storage beta coefficients: K_{j+1} = dt F(U + beta_j K_j), final
/// update U += beta_p K_p, with beta_0 = 0 implicit.
#[derive(Debug, Clone, PartialEq)]
pub struct LowStorageCoeffs {
    pub betas: Vec<f64>,
}

/// c_1 = beta_p; c_{j+1} = beta_{p-j} c_j.
pub fn betas_to_coeffs(ls: &LowStorageCoeffs) -> Vec<f64> {
    let p = ls.betas.len();
    let mut c = Vec::with_capacity(p);
    let mut cur = ls.betas[p - 1];
    c.push(cur);
    for j in 1..p {
        cur *= ls.betas[p - 1 - j];
        c.push(cur);
    }
    c
}

/// Inverse of [`betas_to_coeffs`]; fails when some c_j = 0 (the recurrence
/// beta_{p-j} = c_{j+1}/c_j divides by it).
pub fn coeffs_to_betas(scheme: &RKScheme) -> Result<LowStorageCoeffs> {
    let c = scheme.coeffs();
    let p = c.len();
    for (i, &cj) in c.iter().enumerate() {
        if cj == 0.0 {
            return Err(Error::ZeroCoefficient { index: i + 1 });
        }
    }
    let mut betas = vec![0.0; p];
    betas[p - 1] = c[0];
    for j in 1..p {
        betas[p - 1 - j] = c[j] / c[j - 1];
    }
    Ok(LowStorageCoeffs { betas })
}

/// A registry entry: either a single scheme or an alternating pair.
#[derive(Debug, Clone)]
pub enum SchemeEntry {
    Single(RKScheme),
    Composite(CompositeScheme),
}

impl SchemeEntry {
    pub fn name(&self) -> &str {
        match self {
            SchemeEntry::Single(s) => s.name(),
            SchemeEntry::Composite(c) => c.name(),
        }
    }

    pub fn order(&self) -> usize {
        match self {
            SchemeEntry::Single(s) => s.order(),
            SchemeEntry::Composite(c) => c.order(),
        }
    }

    /// Cost in stages per single step dt (composites average their pair).
    pub fn stages_per_step(&self) -> f64 {
        match self {
            SchemeEntry::Single(s) => s.stages() as f64,
            SchemeEntry::Composite(c) => c.total_stages() as f64 / 2.0,
        }
    }
}

/// Named scheme collection with deterministic iteration order.
#[derive(Debug, Default)]
pub struct Registry {
    entries: Vec<SchemeEntry>,
    index: HashMap<String, usize>,
}

const BUNDLED: &str = include_str!("../data/schemes.txt");

impl Registry {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Maximal order RK1..RK16 plus the bundled optimized schemes.
    pub fn builtin() -> Self {
        let mut reg = Self::default();
        for p in 1..=16 {
            reg.insert(SchemeEntry::Single(RKScheme::maximal(p)))
                .expect("maximal names are unique");
        }
        reg.parse_into(BUNDLED)
            .expect("bundled scheme file is valid");
        reg
    }

    pub fn insert(&mut self, entry: SchemeEntry) -> Result<()> {
        let name = entry.name().to_string();
        if self.index.contains_key(&name) {
            return Err(Error::Validation {
                name,
                msg: "duplicate scheme name".into(),
            });
        }
        self.index.insert(name, self.entries.len());
        self.entries.push(entry);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Result<&SchemeEntry> {
        self.index
            .get(name)
            .map(|&i| &self.entries[i])
            .ok_or_else(|| Error::UnknownScheme(name.into()))
    }

    pub fn entries(&self) -> &[SchemeEntry] {
        &self.entries
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|e| e.name())
    }

    pub fn load_file(&mut self, path: &std::path::Path) -> Result<()> {
        let text = std::fs::read_to_string(path)?;
        self.parse_into(&text)
    }

    /// Parse the line-oriented scheme grammar and add every definition.
    /// Composites may reference schemes defined earlier in the same text or
    /// already present in the registry.
    pub fn parse_into(&mut self, text: &str) -> Result<()> {
        let mut pending: Option<PendingScheme> = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let lineno = lineno + 1;
            let perr = |msg: String| Error::Parse { line: lineno, msg };
            let tokens: Vec<&str> = line.split_whitespace().collect();
            match tokens[0] {
                "scheme" => {
                    if pending.is_some() {
                        return Err(perr("nested 'scheme' before 'end'".into()));
                    }
                    if tokens.len() != 4 {
                        return Err(perr(
                            "expected: scheme <name> stages=<p> order=<q>".into(),
                        ));
                    }
                    let stages = parse_kv(tokens[2], "stages", lineno)?;
                    let order = parse_kv(tokens[3], "order", lineno)?;
                    pending = Some(PendingScheme {
                        name: tokens[1].to_string(),
                        stages,
                        order,
                        given: Vec::new(),
                        start_line: lineno,
                    });
                }
                "c" => {
                    let pend = pending
                        .as_mut()
                        .ok_or_else(|| perr("'c' line outside a scheme block".into()))?;
                    if tokens.len() != 3 {
                        return Err(perr("expected: c <j> <value>".into()));
                    }
                    let j: usize = tokens[1]
                        .parse()
                        .map_err(|_| perr(format!("bad index '{}'", tokens[1])))?;
                    let v: f64 = tokens[2]
                        .parse()
                        .map_err(|_| perr(format!("bad value '{}'", tokens[2])))?;
                    pend.given.push((j, v, lineno));
                }
                "end" => {
                    let pend = pending
                        .take()
                        .ok_or_else(|| perr("'end' without a scheme block".into()))?;
                    let scheme = pend.finish()?;
                    self.insert(SchemeEntry::Single(scheme))?;
                }
                "composite" => {
                    if pending.is_some() {
                        return Err(perr("'composite' inside a scheme block".into()));
                    }
                    if tokens.len() != 4 {
                        return Err(perr(
                            "expected: composite <name> first=<a> second=<b>".into(),
                        ));
                    }
                    let first = parse_kv_str(tokens[2], "first", lineno)?;
                    let second = parse_kv_str(tokens[3], "second", lineno)?;
                    let get_single = |n: &str| -> Result<RKScheme> {
                        match self.get(n)? {
                            SchemeEntry::Single(s) => Ok(s.clone()),
                            SchemeEntry::Composite(_) => Err(Error::Parse {
                                line: lineno,
                                msg: format!("'{n}' is itself a composite"),
                            }),
                        }
                    };
                    let cs =
                        CompositeScheme::new(tokens[1].to_string(), get_single(first)?, get_single(second)?);
                    self.insert(SchemeEntry::Composite(cs))?;
                }
                other => {
                    return Err(perr(format!("unknown directive '{other}'")));
                }
            }
        }
        if let Some(p) = pending {
            return Err(Error::Parse {
                line: p.start_line,
                msg: format!("scheme '{}' not terminated by 'end'", p.name),
            });
        }
        Ok(())
    }
}

struct PendingScheme {
    name: String,
    stages: usize,
    order: usize,
    given: Vec<(usize, f64, usize)>,
    start_line: usize,
}

impl PendingScheme {
    fn finish(self) -> Result<RKScheme> {
        let mut coeffs: Vec<Option<f64>> = vec![None; self.stages];
        for j in 1..=self.order.min(self.stages) {
            coeffs[j - 1] = Some(inv_factorial(j));
        }
        for (j, v, line) in &self.given {
            if *j == 0 || *j > self.stages {
                return Err(Error::Parse {
                    line: *line,
                    msg: format!("coefficient index {j} out of range 1..={}", self.stages),
                });
            }
            if coeffs[*j - 1].is_some() {
                return Err(Error::Parse {
                    line: *line,
                    msg: format!("coefficient c_{j} given twice or implied by the order"),
                });
            }
            coeffs[*j - 1] = Some(*v);
        }
        let mut c = Vec::with_capacity(self.stages);
        for (i, v) in coeffs.into_iter().enumerate() {
            match v {
                Some(v) => c.push(v),
                None => {
                    return Err(Error::Parse {
                        line: self.start_line,
                        msg: format!("coefficient c_{} missing for '{}'", i + 1, self.name),
                    })
                }
            }
        }
        RKScheme::new(self.name, self.order, c)
    }
}

fn parse_kv(token: &str, key: &str, line: usize) -> Result<usize> {
    let v = parse_kv_str(token, key, line)?;
    v.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("bad {key} value '{v}'"),
    })
}

fn parse_kv_str<'a>(token: &'a str, key: &str, line: usize) -> Result<&'a str> {
    match token.split_once('=') {
        Some((k, v)) if k == key => Ok(v),
        _ => Err(Error::Parse {
            line,
            msg: format!("expected {key}=<value>, got '{token}'"),
        }),
    }
}

/// Render a scheme block in the registry file grammar (used when appending
/// optimizer output).
pub fn format_scheme(s: &RKScheme) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "scheme {} stages={} order={}",
        s.name(),
        s.stages(),
        s.order()
    )
    .unwrap();
    for j in s.order() + 1..=s.stages() {
        writeln!(out, "c {} {}", j, s.coeffs()[j - 1]).unwrap();
    }
    out.push_str("end\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64 as C;

    /// Naive power-sum oracle for r(z).
    fn naive_amp(c: &[f64], z: C) -> C {
        let s = C::new(0.0, -1.0) * z;
        let mut sum = C::new(1.0, 0.0);
        let mut pw = C::new(1.0, 0.0);
        for &cj in c {
            pw *= s;
            sum += cj * pw;
        }
        sum
    }

    #[test]
    fn amplification_at_zero_is_one() {
        for p in [1, 4, 9, 16] {
            let s = RKScheme::maximal(p);
            assert_eq!(s.amplification(C::new(0.0, 0.0)), C::new(1.0, 0.0));
        }
    }

    #[test]
    fn rk4_at_pi_matches_direct_substitution() {
        let s = RKScheme::maximal(4);
        let pi = std::f64::consts::PI;
        let expect = C::new(1.0 - pi * pi / 2.0 + pi.powi(4) / 24.0, -pi + pi.powi(3) / 6.0);
        assert!((s.amplification(C::new(pi, 0.0)) - expect).norm() < 1e-13);
    }

    #[test]
    fn horner_matches_power_sum_oracle() {
        let reg = Registry::builtin();
        let SchemeEntry::Single(opt6) = reg.get("Opt6").unwrap() else {
            panic!()
        };
        let z = C::new(0.5, 0.0);
        let d = (opt6.amplification(z) - naive_amp(opt6.coeffs(), z)).norm();
        assert!(d < 1e-14, "Horner vs naive differ by {d}");
    }

    #[test]
    fn maximal_matches_truncated_exponential() {
        for p in [1, 3, 8, 16] {
            let s = RKScheme::maximal(p);
            for &(re, im) in &[(0.3, 0.0), (2.0, 1.5), (-3.0, 2.5), (4.0, 0.0)] {
                let z = C::new(re, im);
                let mut sum = C::new(0.0, 0.0);
                let mut term = C::new(1.0, 0.0);
                for j in 0..=p {
                    sum += term;
                    term *= C::new(0.0, -1.0) * z / (j as f64 + 1.0);
                }
                let r = s.amplification(z);
                assert!((r - sum).norm() <= 1e-13 * sum.norm().max(1.0));
            }
        }
    }

    #[test]
    fn composite_is_product_of_factors() {
        let reg = Registry::builtin();
        let SchemeEntry::Composite(cs) = reg.get("LDDRK46").unwrap() else {
            panic!()
        };
        let z = C::new(0.3, 0.1);
        let prod = cs.first().amplification(z) * cs.second().amplification(z);
        assert!((cs.amplification(z) - prod).norm() < 1e-15);
        // composite of RK2 with itself squares the factor
        let rk2 = RKScheme::maximal(2);
        let twice = CompositeScheme::new("twice", rk2.clone(), rk2.clone());
        let r = rk2.amplification(z);
        assert!((twice.amplification(z) - r * r).norm() < 1e-15);
        assert!((twice.amplification(C::new(0.0, 0.0)) - C::new(1.0, 0.0)).norm() == 0.0);
    }

    #[test]
    fn composite_pairs_are_fourth_order() {
        let reg = Registry::builtin();
        for name in ["LDDRK46", "LDDRK56"] {
            let SchemeEntry::Composite(cs) = reg.get(name).unwrap() else {
                panic!()
            };
            assert_eq!(cs.order(), 4, "{name} product order");
        }
    }

    #[test]
    fn beta_conversions() {
        // c_1 = beta_p
        let c = betas_to_coeffs(&LowStorageCoeffs { betas: vec![1.0] });
        assert_eq!(c, vec![1.0]);
        // midpoint two-stage
        let c = betas_to_coeffs(&LowStorageCoeffs {
            betas: vec![0.5, 1.0],
        });
        assert_eq!(c, vec![1.0, 0.5]);
        // classic low-storage RK4 betas give maximal coefficients
        let c = betas_to_coeffs(&LowStorageCoeffs {
            betas: vec![0.25, 1.0 / 3.0, 0.5, 1.0],
        });
        for (j, &cj) in c.iter().enumerate() {
            assert!((cj - inv_factorial(j + 1)).abs() < 1e-15);
        }
        // and invert back
        let rk4 = RKScheme::maximal(4);
        let b = coeffs_to_betas(&rk4).unwrap();
        for (b, e) in b.betas.iter().zip([0.25, 1.0 / 3.0, 0.5, 1.0]) {
            assert!((b - e).abs() < 1e-15);
        }
    }

    #[test]
    fn zero_coefficient_has_no_beta_form() {
        let s = RKScheme::new("z", 1, vec![1.0, 0.5, 0.0, 0.1]).unwrap();
        match coeffs_to_betas(&s) {
            Err(Error::ZeroCoefficient { index: 3 }) => {}
            other => panic!("expected ZeroCoefficient(3), got {other:?}"),
        }
    }

    #[test]
    fn beta_roundtrip_on_registry() {
        let reg = Registry::builtin();
        for e in reg.entries() {
            let singles: Vec<&RKScheme> = match e {
                SchemeEntry::Single(s) => vec![s],
                SchemeEntry::Composite(c) => vec![c.first(), c.second()],
            };
            for s in singles {
                let b = coeffs_to_betas(s).unwrap();
                let c = betas_to_coeffs(&b);
                for (got, want) in c.iter().zip(s.coeffs()) {
                    assert!(
                        (got - want).abs() <= 1e-12 * want.abs().max(1.0),
                        "roundtrip failed for {}",
                        s.name()
                    );
                }
            }
        }
    }

    #[test]
    fn order_of_accuracy_cases() {
        assert_eq!(RKScheme::maximal(8).order_of_accuracy(), 8);
        for p in 1..=16 {
            assert_eq!(RKScheme::maximal(p).order_of_accuracy(), p);
        }
        let reg = Registry::builtin();
        let SchemeEntry::Single(opt8) = reg.get("Opt8").unwrap() else {
            panic!()
        };
        assert_eq!(opt8.order_of_accuracy(), 4);
        let s = RKScheme::new("low", 1, vec![1.0, 0.4, 0.1]).unwrap();
        assert_eq!(s.order_of_accuracy(), 1);
    }

    #[test]
    fn implied_coefficients_subtract_exactly() {
        let reg = Registry::builtin();
        let SchemeEntry::Single(opt12) = reg.get("Opt12").unwrap() else {
            panic!()
        };
        for j in 1..=4 {
            assert_eq!(opt12.diff_coeffs()[j - 1], 0.0, "d_{j} must be exactly 0");
        }
        for j in 5..=12 {
            assert_ne!(opt12.diff_coeffs()[j - 1], 0.0);
        }
    }

    #[test]
    fn parser_rejects_bad_input() {
        let mut reg = Registry::empty();
        assert!(reg.parse_into("").is_ok());
        assert_eq!(reg.entries().len(), 0);

        let mut reg = Registry::empty();
        let e = reg.parse_into("scheme x stages=3 order=4\nend\n");
        assert!(matches!(e, Err(Error::Validation { .. })));

        // declared order 4 but c_3 inconsistent: c_3 must not be re-given
        let mut reg = Registry::empty();
        let e = reg.parse_into("scheme x stages=4 order=4\nc 3 0.2\nend\n");
        assert!(e.is_err());

        // c_3 = 0.2 violates declared order 3
        let mut reg = Registry::empty();
        let e = reg.parse_into("scheme x stages=4 order=2\nc 3 0.2\nc 4 0.01\nend\n");
        assert!(e.is_ok());
        let mut reg = Registry::empty();
        let e = reg.parse_into(
            "scheme x stages=4 order=3\nc 4 0.01\nend\nscheme x stages=4 order=3\nc 4 0.01\nend\n",
        );
        assert!(matches!(e, Err(Error::Validation { .. })), "duplicate name");
    }

    #[test]
    fn bundled_registry_contents() {
        let reg = Registry::builtin();
        for name in [
            "RK1", "RK16", "LDDRK4", "LDDRK5", "LDDRK6", "BBo5s", "BBo6s", "LDDRK46", "LDDRK56",
            "Opt6", "Opt8", "Opt12",
        ] {
            assert!(reg.get(name).is_ok(), "missing {name}");
        }
        assert_eq!(reg.get("LDDRK4").unwrap().order(), 2);
        assert_eq!(reg.get("LDDRK5").unwrap().order(), 2);
        assert_eq!(reg.get("LDDRK6").unwrap().order(), 4);
        assert_eq!(reg.get("LDDRK46").unwrap().order(), 4);
        assert_eq!(reg.get("LDDRK56").unwrap().order(), 4);
        assert_eq!(reg.get("Opt12").unwrap().order(), 4);
        assert!(matches!(reg.get("nosuch"), Err(Error::UnknownScheme(_))));
    }

    #[test]
    fn format_scheme_roundtrips() {
        let reg = Registry::builtin();
        let SchemeEntry::Single(opt6) = reg.get("Opt6").unwrap() else {
            panic!()
        };
        let text = format_scheme(opt6);
        let mut reg2 = Registry::empty();
        reg2.parse_into(&text).unwrap();
        let SchemeEntry::Single(back) = reg2.get("Opt6").unwrap() else {
            panic!()
        };
        assert_eq!(back.coeffs(), opt6.coeffs());
    }

    #[test]
    fn cauchy_riemann_residual_small() {
        // holomorphy check via central differences
        let s = RKScheme::maximal(6);
        let h = 1e-4;
        for &(re, im) in &[(0.7, -0.3), (1.9, 1.1)] {
            let z = C::new(re, im);
            let dx = (s.amplification(z + C::new(h, 0.0)) - s.amplification(z - C::new(h, 0.0)))
                / (2.0 * h);
            let dy = (s.amplification(z + C::new(0.0, h)) - s.amplification(z - C::new(0.0, h)))
                / (2.0 * h);
            // f'(z) along real axis equals -i times derivative along imaginary axis
            assert!((dx - dy * C::new(0.0, -1.0)).norm() < 1e-6);
        }
    }
}
