use crate::error::{Error, Result};

/// Uniformly sampled ground acceleration (m/s²).
#[derive(Debug, Clone, PartialEq)]
pub struct GroundMotionRecord {
    dt: f64,
    samples: Vec<f64>,
    label: String,
}

impl GroundMotionRecord {
    /// Validates `dt > 0`, at least two samples, and finite values.
    pub fn new(dt: f64, samples: Vec<f64>, label: impl Into<String>) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::domain(format!("time step must be positive, got {dt}")));
        }
        if samples.len() < 2 {
            return Err(Error::input(format!(
                "record needs at least 2 samples, got {}",
                samples.len()
            )));
        }
        if let Some(i) = samples.iter().position(|a| !a.is_finite()) {
            return Err(Error::input(format!("sample {i} is not finite")));
        }
        Ok(Self {
            dt,
            samples,
            label: label.into(),
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Time of the last sample.
    pub fn duration(&self) -> f64 {
        (self.samples.len() - 1) as f64 * self.dt
    }

    pub fn time(&self, n: usize) -> f64 {
        n as f64 * self.dt
    }

    /// Peak ground acceleration, max |a|.
    pub fn peak(&self) -> f64 {
        self.samples.iter().fold(0.0_f64, |m, a| m.max(a.abs()))
    }

    /// First `n` samples as a new record.
    pub fn head(&self, n: usize) -> Result<Self> {
        if n > self.samples.len() {
            return Err(Error::input(format!(
                "cannot take {n} samples from a record of {}",
                self.samples.len()
            )));
        }
        Self::new(self.dt, self.samples[..n].to_vec(), self.label.clone())
    }

    /// Sample-wise sum of two records on the same grid.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.dt != other.dt || self.len() != other.len() {
            return Err(Error::input("records must share dt and length to be added"));
        }
        let samples = self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| a + b)
            .collect();
        Self::new(self.dt, samples, format!("{}+{}", self.label, other.label))
    }
}

/// Multiplies every sample by `factor` (intensity scaling); the label records the factor.
pub fn scale_record(record: &GroundMotionRecord, factor: f64) -> Result<GroundMotionRecord> {
    if !factor.is_finite() {
        return Err(Error::domain(format!("scale factor must be finite, got {factor}")));
    }
    let samples = record.samples.iter().map(|a| a * factor).collect();
    GroundMotionRecord::new(
        record.dt,
        samples,
        format!("{} x{}", record.label, factor),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_degenerate_records() {
        assert!(matches!(
            GroundMotionRecord::new(0.02, vec![0.1], "one"),
            Err(Error::Input(_))
        ));
        assert!(matches!(
            GroundMotionRecord::new(0.02, vec![], "none"),
            Err(Error::Input(_))
        ));
        assert!(matches!(
            GroundMotionRecord::new(0.0, vec![0.0, 1.0], "dt"),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            GroundMotionRecord::new(0.02, vec![0.0, f64::NAN], "nan"),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn unit_factor_is_identity() {
        let r = GroundMotionRecord::new(0.02, vec![0.0, 0.1, -0.2], "x").unwrap();
        let s = scale_record(&r, 1.0).unwrap();
        assert_eq!(s.samples(), r.samples());
        assert_eq!(s.dt(), r.dt());
        assert!(s.label().starts_with("x"));
    }

    #[test]
    fn eighty_percent_of_chamoli_peak() {
        let r = GroundMotionRecord::new(0.02, vec![0.0, 0.16885, -0.1], "x").unwrap();
        let s = scale_record(&r, 0.8).unwrap();
        assert!((s.peak() - 0.13508).abs() < 1e-12);
    }

    #[test]
    fn half_then_double_restores() {
        let r = GroundMotionRecord::new(0.01, vec![0.0, 0.3, -0.7, 1e-3], "x").unwrap();
        let back = scale_record(&scale_record(&r, 0.5).unwrap(), 2.0).unwrap();
        for (a, b) in back.samples().iter().zip(r.samples()) {
            assert!((a - b).abs() <= 1e-15);
        }
    }

    #[test]
    fn non_finite_factor_rejected() {
        let r = GroundMotionRecord::new(0.01, vec![0.0, 0.3], "x").unwrap();
        assert!(scale_record(&r, f64::INFINITY).is_err());
    }
}
