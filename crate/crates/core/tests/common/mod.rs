#![allow(dead_code)]

use quake_core::sdof::GroundMotionRecord;

/// max |a - b| / max |b|, with 0 when the reference is identically zero and a matches.
pub fn normwise_rel(a: &[f64], reference: &[f64]) -> f64 {
    assert_eq!(a.len(), reference.len());
    let scale = reference.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    let diff = a
        .iter()
        .zip(reference)
        .fold(0.0_f64, |m, (x, y)| m.max((x - y).abs()));
    if scale == 0.0 {
        diff
    } else {
        diff / scale
    }
}

pub fn constant_record(a0: f64, dt: f64, duration: f64) -> GroundMotionRecord {
    let n = (duration / dt).round() as usize + 1;
    GroundMotionRecord::new(dt, vec![a0; n], "constant").unwrap()
}

/// Closed form of `-(a0/ω) ∫₀ᵗ e^{-cs} sin(ωs) ds`.
pub fn constant_input_response(a0: f64, omega: f64, rate: f64, t: f64) -> f64 {
    let c = rate;
    -(a0 / omega) * (omega - (-c * t).exp() * (c * (omega * t).sin() + omega * (omega * t).cos()))
        / (c * c + omega * omega)
}

/// Undamped closed form `-(a0/ω²)(1 - cos ωt)`.
pub fn constant_input_undamped(a0: f64, omega: f64, t: f64) -> f64 {
    -(a0 / (omega * omega)) * (1.0 - (omega * t).cos())
}

/// Max closed-form error over the record relative to the closed form's peak.
pub fn closed_form_error(values: &[f64], dt: f64, exact: impl Fn(f64) -> f64) -> f64 {
    let reference: Vec<f64> = (0..values.len()).map(|n| exact(n as f64 * dt)).collect();
    normwise_rel(values, &reference)
}
