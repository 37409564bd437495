use super::normalization::Normalization;
use crate::ann::TrainingPair;
use crate::error::{Error, Result};
use crate::sdof::{
    respond_damped, respond_undamped, response_spectrum, DampingSpec, GroundMotionRecord,
    SdofSystem,
};

pub const MAX_WINDOW: usize = 64;

/// How a scalar input series is turned into network input vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Features {
    /// Number of most recent samples fed to the network (1 = pointwise).
    pub window: usize,
    /// Appends a constant 1 to every input vector.
    pub bias: bool,
}

impl Default for Features {
    fn default() -> Self {
        Self { window: 1, bias: false }
    }
}

impl Features {
    pub fn validate(&self) -> Result<()> {
        if self.window == 0 || self.window > MAX_WINDOW {
            return Err(Error::domain(format!(
                "window must be in 1..={MAX_WINDOW}, got {}",
                self.window
            )));
        }
        Ok(())
    }

    pub fn input_size(&self) -> usize {
        self.window + usize::from(self.bias)
    }

    /// Input vector for step `n`: `[x̂ₙ, x̂ₙ₋₁, …]`, padded with the normalized
    /// image of 0 before the start of the series.
    pub fn input_at(&self, normalized: &[f64], n: usize, pad: f64) -> Vec<f64> {
        let mut z = Vec::with_capacity(self.input_size());
        for lag in 0..self.window {
            z.push(if lag <= n { normalized[n - lag] } else { pad });
        }
        if self.bias {
            z.push(1.0);
        }
        z
    }

    /// Applies the features to a whole raw series under `norm`.
    pub fn inputs(&self, norm: &Normalization, raw: &[f64]) -> Vec<Vec<f64>> {
        let normalized: Vec<f64> = raw.iter().map(|&x| norm.normalize_input(x)).collect();
        let pad = norm.normalize_input(0.0);
        (0..raw.len())
            .map(|n| self.input_at(&normalized, n, pad))
            .collect()
    }
}

/// Ordered training pairs together with the raw series and normalization behind them.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainingSet {
    pairs: Vec<TrainingPair>,
    raw_inputs: Vec<f64>,
    raw_targets: Vec<f64>,
    normalization: Normalization,
    features: Features,
    fallback: bool,
}

impl TrainingSet {
    /// Fits the normalization on these series and emits one pair per index.
    pub fn from_series(raw_inputs: Vec<f64>, raw_targets: Vec<f64>, features: Features) -> Result<Self> {
        features.validate()?;
        if raw_inputs.len() != raw_targets.len() {
            return Err(Error::input("input and target series differ in length"));
        }
        let (normalization, fallback) = Normalization::fit(&raw_inputs, &raw_targets)?;
        let pairs = features
            .inputs(&normalization, &raw_inputs)
            .into_iter()
            .zip(&raw_targets)
            .map(|(z, &t)| TrainingPair::new(z, vec![normalization.normalize_target(t)]))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            pairs,
            raw_inputs,
            raw_targets,
            normalization,
            features,
            fallback,
        })
    }

    pub fn pairs(&self) -> &[TrainingPair] {
        &self.pairs
    }

    pub fn raw_inputs(&self) -> &[f64] {
        &self.raw_inputs
    }

    pub fn raw_targets(&self) -> &[f64] {
        &self.raw_targets
    }

    pub fn normalization(&self) -> &Normalization {
        &self.normalization
    }

    pub fn features(&self) -> Features {
        self.features
    }

    /// Set when a series had zero spread and the scale fell back to 1.
    pub fn used_fallback(&self) -> bool {
        self.fallback
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// One pair per time step: ground acceleration in, SDOF response out.
pub fn build_accel_response_set(
    record: &GroundMotionRecord,
    system: &SdofSystem,
    damped: bool,
    features: Features,
) -> Result<TrainingSet> {
    let response = desired_response(record, system, damped)?;
    TrainingSet::from_series(record.samples().to_vec(), response, features)
}

/// One pair per period: period in, peak response out.
pub fn build_spectrum_set(
    record: &GroundMotionRecord,
    periods: &[f64],
    damping: DampingSpec,
    features: Features,
) -> Result<TrainingSet> {
    if features.window != 1 {
        return Err(Error::domain("period-to-peak sets take a single period per pair (window 1)"));
    }
    let spectrum = response_spectrum(record, periods, damping)?;
    TrainingSet::from_series(periods.to_vec(), spectrum.peaks().to_vec(), features)
}

/// First `n_points` pairs, with the normalization refitted on that portion.
pub fn truncate_for_training(set: &TrainingSet, n_points: usize) -> Result<TrainingSet> {
    if n_points == 0 || n_points > set.len() {
        return Err(Error::domain(format!(
            "training point count must be in 1..={}, got {n_points}",
            set.len()
        )));
    }
    if n_points == set.len() {
        return Ok(set.clone());
    }
    TrainingSet::from_series(
        set.raw_inputs[..n_points].to_vec(),
        set.raw_targets[..n_points].to_vec(),
        set.features,
    )
}

/// Oracle response used as the training/evaluation target.
pub fn desired_response(record: &GroundMotionRecord, system: &SdofSystem, damped: bool) -> Result<Vec<f64>> {
    let history = if damped {
        respond_damped(record, system)?
    } else {
        respond_undamped(record, system.omega())?
    };
    Ok(history.into_values())
}
