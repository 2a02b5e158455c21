//! Symmetric spatial low-pass filters.  A filter is applied as
//! u_i <- u_i - sigma * sum_{|j| <= w} f_j u_{i+j}, with f_{-j} = f_j.
//! The damping transfer function is D(k dx) = f_0 + 2 sum_{j>=1} f_j cos(j k dx);
//! well-formed filters have D(0) = 0 and D(pi) = 1.

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct SpatialFilter {
    name: String,
    /// f_0..f_w.
    coeffs: Vec<f64>,
    order: usize,
}

impl SpatialFilter {
    pub fn from_coeffs(name: impl Into<String>, coeffs: Vec<f64>) -> Result<Self> {
        let name = name.into();
        if coeffs.len() < 2 {
            return Err(Error::Validation {
                name,
                msg: "filter needs half-width at least 1".into(),
            });
        }
        // D(0) = 0: constants pass through unchanged.
        let dc = coeffs[0] + 2.0 * coeffs[1..].iter().sum::<f64>();
        if dc.abs() > 1e-9 {
            return Err(Error::Validation {
                name,
                msg: format!("filter does not annihilate constants: D(0) = {dc}"),
            });
        }
        // order = multiplicity of the zero of D at k = 0, from the moment sums
        // sum j^(2m) f_j.
        let w = coeffs.len() - 1;
        let mut order = 2 * w;
        for m in 1..=w {
            let s: f64 = coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, &f)| ((i + 1) as f64).powi(2 * m as i32) * f)
                .sum();
            if s.abs() > 1e-9 * ((w as f64).powi(2 * m as i32)) {
                order = 2 * m;
                break;
            }
        }
        Ok(Self { name, coeffs, order })
    }

    /// Standard filter of order 2m: D(k) = ((1 - cos k)/2)^m, half-width m.
    pub fn standard(order: usize) -> Self {
        assert!(order >= 2 && order % 2 == 0);
        let m = order / 2;
        let coeffs = cos_power_coeffs(m, 0.5);
        Self::from_coeffs(format!("F{order}"), coeffs).expect("standard filter is well-formed")
    }

    /// Sharp-cutoff 19-point filter:
    /// D(k) = (9/256) s^8 - (1/64) s^9 with s = 1 - cos k.
    /// Flat to 16th order at k = 0 and has a fourth-order-flat maximum
    /// D = 1 at the Nyquist wavenumber.
    pub fn sharp16_4() -> Self {
        let s8 = cos_power_coeffs(8, 1.0);
        let s9 = cos_power_coeffs(9, 1.0);
        let mut coeffs = vec![0.0; 10];
        for (j, &v) in s8.iter().enumerate() {
            coeffs[j] += 9.0 / 256.0 * v;
        }
        for (j, &v) in s9.iter().enumerate() {
            coeffs[j] -= 1.0 / 64.0 * v;
        }
        Self::from_coeffs("F16.4", coeffs).expect("sharp filter is well-formed")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn halfwidth(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn transfer(&self, kdx: f64) -> f64 {
        self.coeffs[0]
            + 2.0 * self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, &f)| f * ((i + 1) as f64 * kdx).cos())
                .sum::<f64>()
    }

    /// In-place periodic application with strength sigma.
    pub fn apply(&self, field: &mut [f64], sigma: f64, scratch: &mut Vec<f64>) -> Result<()> {
        let n = field.len();
        let w = self.halfwidth();
        if n < 2 * w + 1 {
            return Err(Error::Size { len: n, halfwidth: w });
        }
        scratch.clear();
        scratch.extend_from_slice(field);
        for i in 0..n {
            let mut s = self.coeffs[0] * scratch[i];
            if i >= w && i + w < n {
                for (jm1, &f) in self.coeffs[1..].iter().enumerate() {
                    let j = jm1 + 1;
                    s += f * (scratch[i + j] + scratch[i - j]);
                }
            } else {
                for (jm1, &f) in self.coeffs[1..].iter().enumerate() {
                    let j = jm1 + 1;
                    s += f * (scratch[(i + j) % n] + scratch[(i + n - j) % n]);
                }
            }
            field[i] = scratch[i] - sigma * s;
        }
        Ok(())
    }
}

/// Coefficients f_0..f_m of (scale * (1 - cos k))^m as a cosine polynomial
/// f_0 + 2 sum f_j cos(jk), via repeated symmetric convolution.
pub(crate) fn cos_power_coeffs(m: usize, scale: f64) -> Vec<f64> {
    // Laurent representation t[-w..w] stored as t[0..=w] (symmetric).
    let base = [scale, -0.5 * scale]; // t_0 = scale, t_{+-1} = -scale/2
    let mut acc = vec![1.0]; // identity
    for _ in 0..m {
        acc = conv_symmetric(&acc, &base);
    }
    acc
}

/// Product of two symmetric Laurent polynomials given by their j >= 0 halves.
pub(crate) fn conv_symmetric(a: &[f64], b: &[f64]) -> Vec<f64> {
    let wa = a.len() as isize - 1;
    let wb = b.len() as isize - 1;
    let get = |c: &[f64], j: isize| -> f64 {
        let j = j.unsigned_abs();
        if j < c.len() {
            c[j]
        } else {
            0.0
        }
    };
    let w = wa + wb;
    let mut out = vec![0.0; w as usize + 1];
    for (k, o) in out.iter_mut().enumerate() {
        let k = k as isize;
        for i in -wa..=wa {
            *o += get(a, i) * get(b, k - i);
        }
    }
    out
}
