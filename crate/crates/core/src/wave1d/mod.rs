//! Periodic 1D damped-wave benchmark: high-order central and DRP stencils,
//! per-step spatial filtering, low-storage RK time stepping, characteristic
//! analytic solution, and the error/effort bookkeeping used in sweeps.

mod filter;
mod problem;
mod solver;
mod stencil;

pub use filter::SpatialFilter;
pub use problem::{DampingProfile, WavePacket, WaveProblem, DOMAIN_LENGTH, FINAL_TIME};
pub use solver::{
    noise_floor, run_benchmark, sweep, BenchResult, Solver, DEFAULT_FILTER_SIGMA,
};
pub use stencil::{Stencil, StencilFamily, StencilSet};
