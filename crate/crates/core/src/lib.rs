//! Multilevel stationary Gaussian quasi-interpolation of 1-periodic even
//! functions.
//!
//! The crate is split along the lines of the computation:
//!
//! * [`kernel`]: the Gaussian `psi`, its Fourier transform, Jacobi theta
//!   evaluators and the constants that drive the error analysis.
//! * [`spectral`]: cosine series, grid samples, and the quasi-interpolation
//!   operator evaluated both directly and exactly in frequency space.
//! * [`multilevel`]: the residual-correction driver with per-level reports.
//! * [`analysis`]: the truncation-coefficient recursion, lemma scanners,
//!   high-frequency identities and the main error bound.

// `!(x < y)` is deliberate: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
mod dd;
mod error;
pub mod kernel;
pub mod multilevel;
pub mod spectral;

pub use error::{Error, Result};
pub use kernel::{bound_constants, psi, psi_hat, BoundConstants};
pub use multilevel::{
    decay_ratios, multilevel_residual, multilevel_sampled, multilevel_spectral, run_multilevel,
    LevelReport, Mode, RunConfig,
};
pub use spectral::{
    eval_series, qi_eval_direct, qi_spectral, sample, sobolev_norm, sup_norm_estimate, wiener_norm,
    CosineSeries, EvalSpec, GridSamples, QuasiInterpolant,
};
