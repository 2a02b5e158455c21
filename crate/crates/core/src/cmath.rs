//! Complex helpers that stay accurate near branch points: log(1+w) for
//! |w| << 1 and e^q - 1 for |q| << 1.  Both are needed because per-step
//! scheme errors can be as small as 1e-45 while r itself is O(1).

use num_complex::Complex64;

/// log(1 + w) with full relative accuracy for small |w|.
/// Returns `None` when 1 + w == 0 (log undefined).
pub fn ln_1p(w: Complex64) -> Option<Complex64> {
    let one_p = Complex64::new(1.0 + w.re, w.im);
    if one_p.re == 0.0 && one_p.im == 0.0 {
        return None;
    }
    // |1+w|^2 - 1 = 2 Re w + |w|^2, computed without forming |1+w| first.
    let t = 2.0 * w.re + w.norm_sqr();
    let re = if t > -1.0 {
        0.5 * t.ln_1p()
    } else {
        one_p.norm().ln()
    };
    Some(Complex64::new(re, one_p.arg()))
}

/// Real part of log(1 + w): log|1 + w|, i.e. the per-step growth rate of a
/// factor 1 + w.  -inf when 1 + w == 0.
pub fn ln_abs_1p(w: Complex64) -> f64 {
    let t = 2.0 * w.re + w.norm_sqr();
    if t > -1.0 {
        0.5 * t.ln_1p()
    } else {
        f64::NEG_INFINITY
    }
}

/// e^q - 1 with full relative accuracy for small |q|.
pub fn exp_m1(q: Complex64) -> Complex64 {
    // e^{a+ib} - 1 = (expm1(a) cos b - 2 sin^2(b/2)) + i e^a sin b
    let (s, c) = q.im.sin_cos();
    let em = q.re.exp_m1();
    let half = (0.5 * q.im).sin();
    Complex64::new(em * c - 2.0 * half * half, (em + 1.0) * s)
}
