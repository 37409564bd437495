use rayon::prelude::*;

use super::record::GroundMotionRecord;
use super::response::respond_damped_incremental;
use super::system::{DampedFrequency, DampingSpec, SdofSystem};
use crate::error::{Error, Result};

/// Peak absolute response against natural period at a fixed damping specification.
#[derive(Debug, Clone, PartialEq)]
pub struct ResponseSpectrum {
    periods: Vec<f64>,
    peaks: Vec<f64>,
    damping: DampingSpec,
}

impl ResponseSpectrum {
    pub fn periods(&self) -> &[f64] {
        &self.periods
    }

    pub fn peaks(&self) -> &[f64] {
        &self.peaks
    }

    pub fn damping(&self) -> DampingSpec {
        self.damping
    }

    pub fn len(&self) -> usize {
        self.periods.len()
    }

    pub fn is_empty(&self) -> bool {
        self.periods.is_empty()
    }

    /// Spectrum of a record scaled by `factor` (the oscillator is linear).
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            periods: self.periods.clone(),
            peaks: self.peaks.iter().map(|p| p * factor.abs()).collect(),
            damping: self.damping,
        }
    }
}

/// Evenly spaced periods `start, start + step, ..., ≤ stop`.
///
/// Each value is computed as `start + i·step` and rounded to 12 decimals so
/// that sweeps like 0.5..10 by 0.02 land exactly on their nominal grid.
pub fn period_sweep(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    if !(start.is_finite() && stop.is_finite() && step.is_finite()) {
        return Err(Error::domain("sweep bounds must be finite"));
    }
    if start <= 0.0 || step <= 0.0 || stop < start {
        return Err(Error::domain(format!(
            "invalid sweep start={start} stop={stop} step={step}"
        )));
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..count)
        .map(|i| {
            let p = start + i as f64 * step;
            (p * 1e12).round() / 1e12
        })
        .collect())
}

/// Peak response for each period, with `ω = 1/T`.
///
/// Periods are evaluated in parallel; each entry is independent so the result
/// is identical to a serial evaluation.
pub fn response_spectrum(
    record: &GroundMotionRecord,
    periods: &[f64],
    damping: DampingSpec,
) -> Result<ResponseSpectrum> {
    response_spectrum_with_kernel(record, periods, damping, DampedFrequency::Literal)
}

pub fn response_spectrum_with_kernel(
    record: &GroundMotionRecord,
    periods: &[f64],
    damping: DampingSpec,
    kernel: DampedFrequency,
) -> Result<ResponseSpectrum> {
    if periods.is_empty() {
        return Err(Error::input("spectrum needs at least one period"));
    }
    if let Some(p) = periods.iter().find(|p| !(p.is_finite() && **p > 0.0)) {
        return Err(Error::domain(format!("periods must be positive, got {p}")));
    }
    if periods.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::domain("periods must be strictly increasing"));
    }
    let peaks = periods
        .par_iter()
        .map(|&period| {
            let system = SdofSystem::from_period(period, damping)?.with_kernel(kernel)?;
            Ok(respond_damped_incremental(record, &system)?.peak())
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(ResponseSpectrum {
        periods: periods.to_vec(),
        peaks,
        damping,
    })
}
