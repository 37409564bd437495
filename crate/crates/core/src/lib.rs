//! Earthquake response of single-degree-of-freedom structures and a
//! back-propagation network surrogate for it.
//!
//! - [`sdof`]: Duhamel-integral response histories (direct trapezoidal and
//!   O(n) recursive) and response spectra.
//! - [`ann`]: a one-hidden-layer bipolar-sigmoid network trained by
//!   per-pattern error back-propagation, with finite-difference checking and
//!   a text weights format.
//! - [`pipeline`]: acceleration→response and period→peak data sets,
//!   normalization, and train/predict/evaluate experiments.
//! - [`io`]: record files, CSV, configuration, synthetic records.
//! - [`cli`]: the `quake` command.

pub mod ann;
pub mod cli;
mod error;
pub mod io;
pub mod pipeline;
pub mod sdof;

pub use error::{Error, Result};
