use num_complex::Complex64;

use super::record::GroundMotionRecord;
use super::system::SdofSystem;
use crate::error::{Error, Result};

/// Relative response history produced by a convolution solver.
#[derive(Debug, Clone, PartialEq)]
pub struct ResponseHistory {
    dt: f64,
    values: Vec<f64>,
    peak: f64,
}

impl ResponseHistory {
    /// Wraps a series and recomputes its peak.
    pub fn from_values(dt: f64, values: Vec<f64>) -> Self {
        let peak = peak_abs(&values);
        Self { dt, values, peak }
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// max |x(t)|
    pub fn peak(&self) -> f64 {
        self.peak
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

pub(crate) fn peak_abs(values: &[f64]) -> f64 {
    values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
}

/// Undamped response `x(t) = -(1/ω) ∫₀ᵗ ä(τ) sin ω(t-τ) dτ`, trapezoidal rule on the record grid.
pub fn respond_undamped(record: &GroundMotionRecord, omega: f64) -> Result<ResponseHistory> {
    if !(omega.is_finite() && omega > 0.0) {
        return Err(Error::domain(format!("omega must be positive, got {omega}")));
    }
    Ok(direct_convolution(record, omega, 0.0))
}

/// Damped response `x(t) = -(1/ω) ∫₀ᵗ ä(τ) e^{-ξω(t-τ)} sin ω(t-τ) dτ`.
///
/// Direct O(n²) trapezoidal evaluation. With the corrected kernel the sine
/// frequency and prefactor use the damped frequency instead of ω.
pub fn respond_damped(record: &GroundMotionRecord, system: &SdofSystem) -> Result<ResponseHistory> {
    Ok(direct_convolution(
        record,
        system.kernel_frequency(),
        system.damping_rate(),
    ))
}

/// Same contract as [`respond_damped`], evaluated in O(n).
///
/// The trapezoidal sum at step n is `dt·Im(Qₙ)` with `Qₙ = z·Qₙ₋₁ + äₙ`,
/// `Q₀ = ä₀/2` and `z = exp((-c + iω) dt)`; the endpoint term carries
/// `sin 0 = 0` and drops out.
pub fn respond_damped_incremental(
    record: &GroundMotionRecord,
    system: &SdofSystem,
) -> Result<ResponseHistory> {
    let omega = system.kernel_frequency();
    let rate = system.damping_rate();
    let dt = record.dt();
    let step = Complex64::new(-rate * dt, omega * dt).exp();
    let scale = -dt / omega;

    let samples = record.samples();
    let mut values = Vec::with_capacity(samples.len());
    let mut acc = Complex64::new(0.5 * samples[0], 0.0);
    values.push(0.0);
    for &a in &samples[1..] {
        acc = step * acc + a;
        values.push(scale * acc.im);
    }
    Ok(ResponseHistory::from_values(dt, values))
}

fn direct_convolution(record: &GroundMotionRecord, omega: f64, rate: f64) -> ResponseHistory {
    let dt = record.dt();
    let samples = record.samples();
    let scale = -dt / omega;
    // kernel[k] = e^{-c k dt} sin(ω k dt); kernel[0] = 0 so the upper endpoint vanishes.
    let kernel: Vec<f64> = (0..samples.len())
        .map(|k| {
            let s = k as f64 * dt;
            (-rate * s).exp() * (omega * s).sin()
        })
        .collect();

    let values = (0..samples.len())
        .map(|n| {
            if n == 0 {
                return 0.0;
            }
            let mut sum = 0.5 * samples[0] * kernel[n];
            for m in 1..n {
                sum += samples[m] * kernel[n - m];
            }
            scale * sum
        })
        .collect();
    ResponseHistory::from_values(dt, values)
}
