//! Single-degree-of-freedom response to base excitation via the Duhamel
//! convolution integral, and response spectra built from it.

mod record;
mod response;
mod spectrum;
mod system;

pub use record::{scale_record, GroundMotionRecord};
pub use response::{
    respond_damped, respond_damped_incremental, respond_undamped, ResponseHistory,
};
pub use spectrum::{period_sweep, response_spectrum, response_spectrum_with_kernel, ResponseSpectrum};
pub use system::{DampedFrequency, DampingSpec, SdofSystem};
