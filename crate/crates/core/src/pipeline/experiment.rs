use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use super::dataset::{
    build_accel_response_set, build_spectrum_set, desired_response, truncate_for_training,
    Features, TrainingSet,
};
use super::normalization::Normalization;
use crate::ann::{train, MlpNetwork, TrainReport, TrainerConfig};
use crate::error::{Error, Result};
use crate::sdof::{
    period_sweep, response_spectrum, scale_record, DampingSpec, GroundMotionRecord, SdofSystem,
};

pub const MAX_HIDDEN: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Ground acceleration at each step in, response at that step out.
    AccelToResponse,
    /// Natural period in, peak response out.
    PeriodToPeak,
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "accel_to_response" => Ok(Mode::AccelToResponse),
            "period_to_peak" => Ok(Mode::PeriodToPeak),
            other => Err(Error::usage(format!(
                "mode must be `accel_to_response` or `period_to_peak`, got `{other}`"
            ))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::AccelToResponse => "accel_to_response",
            Mode::PeriodToPeak => "period_to_peak",
        })
    }
}

/// Period grid `start..=stop` by `step`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sweep {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Sweep {
    pub fn periods(&self) -> Result<Vec<f64>> {
        period_sweep(self.start, self.stop, self.step)
    }
}

impl Default for Sweep {
    fn default() -> Self {
        Self { start: 0.5, stop: 10.0, step: 0.02 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub mode: Mode,
    pub record: GroundMotionRecord,
    pub system: SdofSystem,
    /// Use the damped kernel for accel-to-response targets.
    pub damped: bool,
    pub sweep: Sweep,
    pub spectrum_damping: DampingSpec,
    /// Second record whose spectrum is used as held-out data in period mode.
    pub eval_record: Option<GroundMotionRecord>,
    /// Period step of the held-out grid (same start/stop as `sweep`).
    pub eval_step: f64,
    /// Leading points used for training; `None` trains on everything.
    pub train_points: Option<usize>,
    /// Intensity factors evaluated in accel mode.
    pub factors: Vec<f64>,
    pub hidden: usize,
    pub features: Features,
    pub trainer: TrainerConfig,
}

impl ExperimentSpec {
    /// Defaults for everything except the record and system.
    pub fn new(mode: Mode, record: GroundMotionRecord, system: SdofSystem) -> Self {
        Self {
            mode,
            record,
            system,
            damped: false,
            sweep: Sweep::default(),
            spectrum_damping: DampingSpec::Ratio(0.05),
            eval_record: None,
            eval_step: 0.5,
            train_points: None,
            factors: vec![1.0],
            hidden: 10,
            features: Features::default(),
            trainer: TrainerConfig::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.trainer.validate()?;
        self.features.validate()?;
        if self.hidden == 0 || self.hidden > MAX_HIDDEN {
            return Err(Error::domain(format!(
                "hidden size must be in 1..={MAX_HIDDEN}, got {}",
                self.hidden
            )));
        }
        if self.factors.is_empty() {
            return Err(Error::usage("at least one intensity factor is required"));
        }
        if let Some(f) = self.factors.iter().find(|f| !(f.is_finite() && **f > 0.0)) {
            return Err(Error::domain(format!("intensity factors must be positive, got {f}")));
        }
        let available = match self.mode {
            Mode::AccelToResponse => self.record.len(),
            Mode::PeriodToPeak => self.sweep.periods()?.len(),
        };
        if let Some(n) = self.train_points {
            if n == 0 || n > available {
                return Err(Error::domain(format!(
                    "train_points must be in 1..={available}, got {n}"
                )));
            }
        }
        if self.mode == Mode::PeriodToPeak {
            if self.features.window != 1 {
                return Err(Error::domain("period_to_peak mode requires window = 1"));
            }
            if !(self.eval_step.is_finite() && self.eval_step > 0.0) {
                return Err(Error::domain("eval_step must be positive"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Metrics {
    pub desired_peak: f64,
    pub predicted_peak: f64,
    pub rms_error: f64,
    /// RMS error over RMS of the desired series.
    pub relative_rms: f64,
    /// Relative RMS restricted to the points used in training.
    pub relative_rms_train_range: f64,
    pub peak_relative_error: f64,
}

impl Metrics {
    pub fn compute(desired: &[f64], predicted: &[f64], train_range: usize) -> Self {
        let k = train_range.min(desired.len());
        let desired_peak = desired.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let predicted_peak = predicted.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let rms_error = rms_diff(desired, predicted);
        Self {
            desired_peak,
            predicted_peak,
            rms_error,
            relative_rms: relative_rms(desired, predicted),
            relative_rms_train_range: relative_rms(&desired[..k], &predicted[..k]),
            peak_relative_error: ratio_or_zero((predicted_peak - desired_peak).abs(), desired_peak),
        }
    }
}

fn rms(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    (values.iter().map(|v| v * v).sum::<f64>() / values.len() as f64).sqrt()
}

fn rms_diff(a: &[f64], b: &[f64]) -> f64 {
    let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    rms(&d)
}

/// `rms(p - d) / rms(d)`; zero when both vanish.
pub fn relative_rms(desired: &[f64], predicted: &[f64]) -> f64 {
    ratio_or_zero(rms_diff(desired, predicted), rms(desired))
}

fn ratio_or_zero(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        if num == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        num / den
    }
}

/// Desired and predicted curves for one evaluation case.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub label: String,
    /// Intensity factor (accel mode) or held-out rescale factor (period mode).
    pub factor: f64,
    /// Time in seconds (accel mode) or period in seconds (period mode).
    pub axis: Vec<f64>,
    pub desired: Vec<f64>,
    pub predicted: Vec<f64>,
    pub metrics: Metrics,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentResult {
    pub mode: Mode,
    pub network: MlpNetwork,
    pub normalization: Normalization,
    pub features: Features,
    pub report: TrainReport,
    pub train_points: usize,
    pub normalization_fallback: bool,
    pub evaluations: Vec<Evaluation>,
}

/// Applies a trained network to every sample of a record.
pub fn predict_history(
    net: &MlpNetwork,
    norm: &Normalization,
    features: Features,
    record: &GroundMotionRecord,
) -> Result<Vec<f64>> {
    check_input_size(net, features)?;
    features
        .inputs(norm, record.samples())
        .iter()
        .map(|z| Ok(norm.denormalize_target(net.forward(z)?.output[0])))
        .collect()
}

/// Applies a trained period-to-peak network to each period.
pub fn predict_spectrum(
    net: &MlpNetwork,
    norm: &Normalization,
    features: Features,
    periods: &[f64],
) -> Result<Vec<f64>> {
    check_input_size(net, features)?;
    features
        .inputs(norm, periods)
        .iter()
        .map(|z| Ok(norm.denormalize_target(net.forward(z)?.output[0])))
        .collect()
}

fn check_input_size(net: &MlpNetwork, features: Features) -> Result<()> {
    if net.input_size() != features.input_size() {
        return Err(Error::input(format!(
            "network has {} inputs but window={} bias={} needs {}",
            net.input_size(),
            features.window,
            features.bias,
            features.input_size()
        )));
    }
    if net.output_size() != 1 {
        return Err(Error::input(format!(
            "surrogate networks have one output, got {}",
            net.output_size()
        )));
    }
    Ok(())
}

/// Builds the data set, trains, and evaluates the surrogate against the oracle.
///
/// Accel mode evaluates every intensity factor over the full record. Period
/// mode evaluates the training sweep and, when an `eval_record` is given, its
/// spectrum on the coarser `eval_step` grid after rescaling it so that its
/// largest peak matches the training spectrum's largest peak.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentResult> {
    spec.validate()?;
    let full = match spec.mode {
        Mode::AccelToResponse => {
            build_accel_response_set(&spec.record, &spec.system, spec.damped, spec.features)?
        }
        Mode::PeriodToPeak => build_spectrum_set(
            &spec.record,
            &spec.sweep.periods()?,
            spec.spectrum_damping,
            spec.features,
        )?,
    };
    let train_points = spec.train_points.unwrap_or(full.len());
    let set = truncate_for_training(&full, train_points)?;
    let (network, report) = train_surrogate(&set, spec.hidden, &spec.trainer)?;
    let norm = *set.normalization();

    let evaluations = match spec.mode {
        Mode::AccelToResponse => spec
            .factors
            .par_iter()
            .map(|&factor| {
                let scaled = scale_record(&spec.record, factor)?;
                let desired = desired_response(&scaled, &spec.system, spec.damped)?;
                let predicted = predict_history(&network, &norm, spec.features, &scaled)?;
                let axis = (0..scaled.len()).map(|n| scaled.time(n)).collect();
                let metrics = Metrics::compute(&desired, &predicted, train_points);
                Ok(Evaluation {
                    label: format!("{}%", format_percent(factor)),
                    factor,
                    axis,
                    desired,
                    predicted,
                    metrics,
                })
            })
            .collect::<Result<Vec<_>>>()?,
        Mode::PeriodToPeak => {
            let mut out = Vec::new();
            let periods = full.raw_inputs().to_vec();
            let desired = full.raw_targets().to_vec();
            let predicted = predict_spectrum(&network, &norm, spec.features, &periods)?;
            let metrics = Metrics::compute(&desired, &predicted, train_points);
            out.push(Evaluation {
                label: "train".into(),
                factor: 1.0,
                axis: periods,
                desired,
                predicted,
                metrics,
            });
            if let Some(other) = &spec.eval_record {
                out.push(heldout_spectrum(spec, other, &full, &network, &norm)?);
            }
            out
        }
    };

    Ok(ExperimentResult {
        mode: spec.mode,
        network,
        normalization: norm,
        features: spec.features,
        report,
        train_points,
        normalization_fallback: set.used_fallback(),
        evaluations,
    })
}

fn heldout_spectrum(
    spec: &ExperimentSpec,
    other: &GroundMotionRecord,
    full: &TrainingSet,
    network: &MlpNetwork,
    norm: &Normalization,
) -> Result<Evaluation> {
    let periods = period_sweep(spec.sweep.start, spec.sweep.stop, spec.eval_step)?;
    let raw = response_spectrum(other, &periods, spec.spectrum_damping)?;
    let train_max = full.raw_targets().iter().fold(0.0_f64, |m, v| m.max(*v));
    let other_max = raw.peaks().iter().fold(0.0_f64, |m, v| m.max(*v));
    let factor = if other_max > 0.0 { train_max / other_max } else { 1.0 };
    let desired = raw.scaled(factor).peaks().to_vec();
    let predicted = predict_spectrum(network, norm, spec.features, &periods)?;
    let metrics = Metrics::compute(&desired, &predicted, desired.len());
    Ok(Evaluation {
        label: format!("heldout:{}", other.label()),
        factor,
        axis: periods,
        desired,
        predicted,
        metrics,
    })
}

/// Seeded initialization followed by error back-propagation.
pub fn train_surrogate(
    set: &TrainingSet,
    hidden: usize,
    cfg: &TrainerConfig,
) -> Result<(MlpNetwork, TrainReport)> {
    let net = MlpNetwork::seeded(set.features().input_size(), hidden, 1, cfg.init_range, cfg.seed)?;
    train(&net, set.pairs(), cfg)
}

fn format_percent(factor: f64) -> String {
    let pct = factor * 100.0;
    if (pct - pct.round()).abs() < 1e-9 {
        format!("{}", pct.round() as i64)
    } else {
        format!("{pct}")
    }
}

/// Rounds to `digits` significant figures.
pub fn round_sig(x: f64, digits: u32) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let mag = x.abs().log10().floor() as i32;
    let scale = 10f64.powi(digits as i32 - 1 - mag);
    (x * scale).round() / scale
}
