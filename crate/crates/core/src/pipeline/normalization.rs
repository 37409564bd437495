use crate::error::{Error, Result};

/// Half-width of the normalized range; leaves headroom below the sigmoid's ±1.
pub const NORMALIZED_BOUND: f64 = 0.9;

/// Affine maps `x ↦ (x - offset) / scale · 0.9` for inputs and targets.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Normalization {
    pub input_offset: f64,
    pub input_scale: f64,
    pub target_offset: f64,
    pub target_scale: f64,
}

impl Normalization {
    pub fn new(input_offset: f64, input_scale: f64, target_offset: f64, target_scale: f64) -> Result<Self> {
        for (name, v) in [("input offset", input_offset), ("target offset", target_offset)] {
            if !v.is_finite() {
                return Err(Error::input(format!("{name} must be finite")));
            }
        }
        for (name, v) in [("input scale", input_scale), ("target scale", target_scale)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::domain(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(Self {
            input_offset,
            input_scale,
            target_offset,
            target_scale,
        })
    }

    /// Maps each series' extrema onto ±0.9.
    ///
    /// A constant series has no spread; its scale falls back to 1 and the
    /// returned flag is set.
    pub fn fit(inputs: &[f64], targets: &[f64]) -> Result<(Self, bool)> {
        let (input_offset, input_scale, f_in) = midrange(inputs)?;
        let (target_offset, target_scale, f_out) = midrange(targets)?;
        Ok((
            Self {
                input_offset,
                input_scale,
                target_offset,
                target_scale,
            },
            f_in || f_out,
        ))
    }

    pub fn normalize_input(&self, x: f64) -> f64 {
        (x - self.input_offset) / self.input_scale * NORMALIZED_BOUND
    }

    pub fn denormalize_input(&self, y: f64) -> f64 {
        y / NORMALIZED_BOUND * self.input_scale + self.input_offset
    }

    pub fn normalize_target(&self, x: f64) -> f64 {
        (x - self.target_offset) / self.target_scale * NORMALIZED_BOUND
    }

    pub fn denormalize_target(&self, y: f64) -> f64 {
        y / NORMALIZED_BOUND * self.target_scale + self.target_offset
    }
}

fn midrange(values: &[f64]) -> Result<(f64, f64, bool)> {
    if values.is_empty() {
        return Err(Error::input("cannot normalize an empty series"));
    }
    let (lo, hi) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)));
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(Error::input("cannot normalize non-finite values"));
    }
    let half = 0.5 * (hi - lo);
    let mid = 0.5 * (hi + lo);
    if half > 0.0 {
        Ok((mid, half, false))
    } else {
        Ok((mid, 1.0, true))
    }
}
