//! Analysis, optimization and benchmarking of explicit Runge-Kutta
//! timestepping schemes for linear oscillatory problems with complex
//! frequencies.
//!
//! - [`schemes`]: amplification polynomials, low-storage conversions and a
//!   named registry (maximal order RK1..RK16, LDDRK family, Bogey-Bailly,
//!   sector-optimized schemes).
//! - [`spectral`]: phase/amplification errors, stability and accuracy
//!   limits, small-step stability diagnostics, cost-rescaled factors.
//! - [`maps`]: complex-plane error and winner maps with CSV/PGM/PPM output.
//! - [`optimizer`]: constrained scheme optimization over complex-plane
//!   regions.
//! - [`wave1d`]: periodic 1D damped-wave benchmark with high-order stencils
//!   and spatial filters.

pub mod cmath;
pub mod error;
pub mod maps;
pub mod optimizer;
pub mod quad;
pub mod schemes;
pub mod spectral;
pub mod wave1d;

pub use error::{Error, Result};
pub use num_complex::Complex64;
