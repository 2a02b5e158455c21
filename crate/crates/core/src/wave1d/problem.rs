//! The damped-advection benchmark problem: a periodic pressure/velocity wave
//! packet crossing a localized absorbing layer, with a closed-form solution
//! along characteristics.

use std::f64::consts::PI;

use crate::error::{Error, Result};

pub const DOMAIN_LENGTH: f64 = 24.0;
pub const FINAL_TIME: f64 = 24.0;

/// Absorbing layer k(x) = A sin^{2m}(pi u / width) (1 + b cos(2 pi u / width))
/// with u = x - start, supported on [start, start + width] and periodically
/// repeated.  A is set so that int k dx = total, i.e. one full transit
/// multiplies the right-running characteristic by exp(-total).
///
/// b = 0 is the plain sin^{2m} bump.  The flat-top variant picks
/// b = m / (m + 2), which cancels the curvature at the layer center: the
/// peak rate drops (gentler envelope gradients for the spatial scheme to
/// resolve) while the edge smoothness class C^{2m-1} is unchanged.
#[derive(Debug, Clone)]
pub struct DampingProfile {
    start: f64,
    width: f64,
    total: f64,
    power: usize,
    flatten: f64,
    amp: f64,
    /// Profile shape = sum_j cos_coeffs[j] cos(2 pi j u / width).
    cos_coeffs: Vec<f64>,
}

impl DampingProfile {
    pub fn new(start: f64, width: f64, total: f64, power: usize) -> Result<Self> {
        Self::with_flatten(start, width, total, power, 0.0)
    }

    /// Flat-top layer of the same smoothness class; see the type docs.
    pub fn flat_top(start: f64, width: f64, total: f64, power: usize) -> Result<Self> {
        Self::with_flatten(start, width, total, power, power as f64 / (power as f64 + 2.0))
    }

    pub fn with_flatten(start: f64, width: f64, total: f64, power: usize, flatten: f64) -> Result<Self> {
        if !(width > 0.0) || start < 0.0 || start + width > DOMAIN_LENGTH {
            return Err(Error::UnsupportedProblem(format!(
                "damping support [{start}, {}] outside [0, {DOMAIN_LENGTH}]",
                start + width
            )));
        }
        if power == 0 || total < 0.0 || !(0.0..1.0).contains(&flatten) {
            return Err(Error::UnsupportedProblem(
                "damping needs power >= 1, total >= 0 and flatten in [0, 1)".into(),
            ));
        }
        // shape as a cosine polynomial in theta = 2 pi u / width:
        // sin^{2m} = ((1 - cos theta)/2)^m, then times (1 + b cos theta)
        let l = crate::wave1d::filter::cos_power_coeffs(power, 0.5);
        let l = crate::wave1d::filter::conv_symmetric(&l, &[1.0, 0.5 * flatten]);
        let mut cos_coeffs: Vec<f64> = l.iter().map(|&v| 2.0 * v).collect();
        cos_coeffs[0] = l[0];
        // int_0^width shape du = cos_coeffs[0] * width
        let amp = if cos_coeffs[0] * width > 0.0 {
            total / (cos_coeffs[0] * width)
        } else {
            0.0
        };
        Ok(Self {
            start,
            width,
            total,
            power,
            flatten,
            amp,
            cos_coeffs,
        })
    }

    pub fn none() -> Self {
        Self::new(12.0, 2.0, 0.0, 1).expect("trivial profile")
    }

    pub fn total(&self) -> f64 {
        self.total
    }

    pub fn power(&self) -> usize {
        self.power
    }

    pub fn peak(&self) -> f64 {
        self.amp
    }

    /// k(x) for x anywhere on the real line (periodic).
    pub fn value(&self, x: f64) -> f64 {
        let y = x.rem_euclid(DOMAIN_LENGTH);
        let u = y - self.start;
        if !(0.0..=self.width).contains(&u) {
            return 0.0;
        }
        let t = PI * u / self.width;
        self.amp
            * t.sin().powi(2 * self.power as i32)
            * (1.0 + self.flatten * (2.0 * t).cos())
    }

    /// Antiderivative of k over one period, Phi(u) = int_start^{start+u} k.
    fn local_integral(&self, u: f64) -> f64 {
        let w = 2.0 * PI / self.width;
        let mut s = self.cos_coeffs[0] * u;
        for (j, &a) in self.cos_coeffs.iter().enumerate().skip(1) {
            s += a * (j as f64 * w * u).sin() / (j as f64 * w);
        }
        self.amp * s
    }

    /// int_a^b k(x) dx, closed form, valid for any real a <= b or a > b
    /// (antisymmetric).
    pub fn integral(&self, a: f64, b: f64) -> f64 {
        self.cumulative(b) - self.cumulative(a)
    }

    fn cumulative(&self, x: f64) -> f64 {
        let periods = (x / DOMAIN_LENGTH).floor();
        let y = x - periods * DOMAIN_LENGTH;
        let within = if y <= self.start {
            0.0
        } else if y >= self.start + self.width {
            self.total
        } else {
            self.local_integral(y - self.start)
        };
        periods * self.total + within
    }
}

/// Gaussian-modulated cosine packet, periodized over the domain.
#[derive(Debug, Clone)]
pub struct WavePacket {
    pub center: f64,
    /// Half-width at half-maximum of the Gaussian envelope.
    pub hwhm: f64,
    pub wavelength: f64,
}

impl WavePacket {
    pub fn default_packet() -> Self {
        Self {
            center: 6.0,
            hwhm: 2.0,
            wavelength: 1.0,
        }
    }

    /// Periodized value; the image sum keeps the profile smooth across the
    /// domain edges for any argument within a couple of periods.
    pub fn value(&self, x: f64) -> f64 {
        let ln2 = std::f64::consts::LN_2;
        let mut s = 0.0;
        for n in -2..=2 {
            let d = x - self.center + n as f64 * DOMAIN_LENGTH;
            s += (-ln2 * (d / self.hwhm).powi(2)).exp() * (2.0 * PI * d / self.wavelength).cos();
        }
        s
    }
}

/// Problem definition: pressure p and velocity v with p_t = -v_x - k p,
/// v_t = -p_x - k v on the periodic domain, initialized with p = v so the
/// solution is a single right-running characteristic f = p + v.
#[derive(Debug, Clone)]
pub struct WaveProblem {
    pub ppw: usize,
    pub damping: DampingProfile,
    pub packet: WavePacket,
}

impl WaveProblem {
    pub fn new(ppw: usize, damping: DampingProfile, packet: WavePacket) -> Result<Self> {
        if ppw < 4 {
            return Err(Error::UnsupportedProblem(format!(
                "need at least 4 points per unit wavelength, got {ppw}"
            )));
        }
        Ok(Self { ppw, damping, packet })
    }

    /// Default absorbing layer: total 6 over [12, 14], C^5 edges, mildly
    /// flattened top.  Power and flattening are tuned so that the layer's
    /// finite-resolution footprint at PPW 32 with a 15-point stencil sits
    /// near the published high-resolution noise floor.
    pub fn default_benchmark(ppw: usize) -> Result<Self> {
        Self::new(
            ppw,
            DampingProfile::with_flatten(12.0, 2.0, 6.0, 3, 0.35)?,
            WavePacket::default_packet(),
        )
    }

    pub fn undamped(ppw: usize) -> Result<Self> {
        Self::new(ppw, DampingProfile::none(), WavePacket::default_packet())
    }

    pub fn n(&self) -> usize {
        (DOMAIN_LENGTH as usize) * self.ppw
    }

    pub fn dx(&self) -> f64 {
        1.0 / self.ppw as f64
    }

    pub fn grid_x(&self, i: usize) -> f64 {
        i as f64 * self.dx()
    }

    pub fn initial_state(&self) -> (Vec<f64>, Vec<f64>) {
        let n = self.n();
        let p: Vec<f64> = (0..n).map(|i| self.packet.value(self.grid_x(i))).collect();
        (p.clone(), p)
    }

    /// Exact solution at time t: with f = p + v and g = p - v, g stays zero
    /// and f(x, t) = f(x - t, 0) exp(-int_{x-t}^{x} k).
    pub fn analytic_state(&self, t: f64) -> (Vec<f64>, Vec<f64>) {
        let n = self.n();
        let p: Vec<f64> = (0..n)
            .map(|i| {
                let x = self.grid_x(i);
                self.packet.value(x - t) * (-self.damping.integral(x - t, x)).exp()
            })
            .collect();
        (p.clone(), p)
    }

    /// Peak damping rate, used for time step sanity checks.
    pub fn max_damping(&self) -> f64 {
        self.damping.peak()
    }
}
