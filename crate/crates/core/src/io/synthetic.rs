use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::sdof::GroundMotionRecord;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SyntheticKind {
    /// Single tone at `freq`.
    Sine,
    /// Linear chirp from `f0` to `f1`.
    Sweep,
    /// Equal-amplitude tones spread over `[f0, f1]` with seeded random phases.
    Noise,
}

impl FromStr for SyntheticKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sine" => Ok(Self::Sine),
            "sweep" => Ok(Self::Sweep),
            "noise" => Ok(Self::Noise),
            other => Err(Error::usage(format!(
                "synthetic kind must be sine, sweep or noise, got `{other}`"
            ))),
        }
    }
}

impl fmt::Display for SyntheticKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Sine => "sine",
            Self::Sweep => "sweep",
            Self::Noise => "noise",
        })
    }
}

/// All synthetic records carry a `sin²(πt/duration)` envelope so that they
/// start and end at rest, and are scaled to the requested peak.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticParams {
    pub duration: f64,
    pub dt: f64,
    /// Target max |a| in m/s².
    pub peak: f64,
    /// Tone frequency in Hz (sine).
    pub freq: f64,
    /// Band edges in Hz (sweep, noise).
    pub f0: f64,
    pub f1: f64,
    /// Number of tones (noise).
    pub components: usize,
}

impl Default for SyntheticParams {
    fn default() -> Self {
        Self {
            duration: 14.92,
            dt: 0.02,
            peak: 0.16885,
            freq: 3.0,
            f0: 1.0,
            f1: 5.0,
            components: 64,
        }
    }
}

impl SyntheticParams {
    fn validate(&self, kind: SyntheticKind) -> Result<()> {
        let positive = |name: &str, v: f64| -> Result<()> {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::domain(format!("{name} must be positive, got {v}")))
            }
        };
        positive("duration", self.duration)?;
        positive("dt", self.dt)?;
        positive("peak", self.peak)?;
        if self.duration < self.dt {
            return Err(Error::domain("duration must cover at least one time step"));
        }
        match kind {
            SyntheticKind::Sine => positive("freq", self.freq)?,
            SyntheticKind::Sweep | SyntheticKind::Noise => {
                positive("f0", self.f0)?;
                positive("f1", self.f1)?;
                if self.f1 < self.f0 {
                    return Err(Error::domain("f1 must not be below f0"));
                }
                if kind == SyntheticKind::Noise && self.components == 0 {
                    return Err(Error::domain("noise needs at least one component"));
                }
            }
        }
        Ok(())
    }

    /// `round(duration / dt) + 1` samples spanning `[0, duration]`.
    pub fn sample_count(&self) -> usize {
        (self.duration / self.dt).round() as usize + 1
    }
}

/// Deterministic stand-in accelerogram. Only `Noise` consumes the seed.
pub fn generate_synthetic(
    kind: SyntheticKind,
    params: &SyntheticParams,
    seed: u64,
) -> Result<GroundMotionRecord> {
    params.validate(kind)?;
    let n = params.sample_count();
    let span = (n - 1) as f64 * params.dt;
    let times: Vec<f64> = (0..n).map(|i| i as f64 * params.dt).collect();

    let carrier: Vec<f64> = match kind {
        SyntheticKind::Sine => times
            .iter()
            .map(|t| (2.0 * PI * params.freq * t).sin())
            .collect(),
        SyntheticKind::Sweep => {
            let rate = (params.f1 - params.f0) / span;
            times
                .iter()
                .map(|t| (2.0 * PI * (params.f0 * t + 0.5 * rate * t * t)).sin())
                .collect()
        }
        SyntheticKind::Noise => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = params.components;
            let tones: Vec<(f64, f64)> = (0..m)
                .map(|k| {
                    let f = if m == 1 {
                        params.f0
                    } else {
                        params.f0 + (params.f1 - params.f0) * k as f64 / (m - 1) as f64
                    };
                    (f, rng.random_range(0.0..2.0 * PI))
                })
                .collect();
            times
                .iter()
                .map(|t| tones.iter().map(|(f, ph)| (2.0 * PI * f * t + ph).sin()).sum())
                .collect()
        }
    };

    let mut samples: Vec<f64> = times
        .iter()
        .zip(&carrier)
        .map(|(t, c)| (PI * t / span).sin().powi(2) * c)
        .collect();
    let max = samples.iter().fold(0.0_f64, |m, a| m.max(a.abs()));
    if max == 0.0 {
        return Err(Error::domain("synthetic record is identically zero; adjust dt or frequency"));
    }
    let gain = params.peak / max;
    for a in &mut samples {
        *a *= gain;
    }

    let label = match kind {
        SyntheticKind::Sine => format!("synthetic sine {} Hz", params.freq),
        SyntheticKind::Sweep => format!("synthetic sweep {}-{} Hz", params.f0, params.f1),
        SyntheticKind::Noise => format!("synthetic noise {}-{} Hz seed {seed}", params.f0, params.f1),
    };
    GroundMotionRecord::new(params.dt, samples, label)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sine_matches_requested_peak_and_length() {
        let rec = generate_synthetic(SyntheticKind::Sine, &SyntheticParams::default(), 0).unwrap();
        assert_eq!(rec.len(), 747);
        assert!((rec.peak() - 0.16885).abs() < 1e-12);
        assert_eq!(rec.samples()[0], 0.0);
    }

    #[test]
    fn noise_is_seed_deterministic() {
        let p = SyntheticParams::default();
        let a = generate_synthetic(SyntheticKind::Noise, &p, 9).unwrap();
        let b = generate_synthetic(SyntheticKind::Noise, &p, 9).unwrap();
        let c = generate_synthetic(SyntheticKind::Noise, &p, 10).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.samples(), c.samples());
        assert!((a.peak() - 0.16885).abs() < 1e-12);
    }

    #[test]
    fn sweep_peak() {
        let rec = generate_synthetic(SyntheticKind::Sweep, &SyntheticParams::default(), 0).unwrap();
        assert!((rec.peak() - 0.16885).abs() < 1e-12);
    }

    #[test]
    fn invalid_params_rejected() {
        let p = SyntheticParams { peak: 0.0, ..Default::default() };
        assert!(matches!(generate_synthetic(SyntheticKind::Sine, &p, 0), Err(Error::Domain(_))));
        let p = SyntheticParams { dt: -0.1, ..Default::default() };
        assert!(generate_synthetic(SyntheticKind::Sine, &p, 0).is_err());
        let p = SyntheticParams { f0: 5.0, f1: 1.0, ..Default::default() };
        assert!(generate_synthetic(SyntheticKind::Noise, &p, 0).is_err());
    }
}
