//! `key=value` experiment configuration.
//!
//! ```text
//! mode=accel_to_response
//! record=chamoli_like.txt
//! omega=0.5
//! factors=0.5,0.8,1.0,1.2
//! beta=0.05
//! hidden=10
//! ```
//!
//! Unknown or repeated keys are errors. Record paths are resolved against the
//! directory of the config file.

use std::collections::BTreeMap;
use std::io::BufRead;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use super::record_file::read_record_file;
use crate::ann::TrainerConfig;
use crate::error::{Error, Result};
use crate::pipeline::{ExperimentSpec, Features, Mode, Sweep};
use crate::sdof::{DampedFrequency, DampingSpec, SdofSystem};

const KEYS: &[&str] = &[
    "mode",
    "record",
    "eval_record",
    "omega",
    "damping_rate",
    "damped",
    "kernel",
    "spectrum_damping",
    "period_start",
    "period_stop",
    "period_step",
    "eval_step",
    "train_points",
    "train_fraction",
    "factors",
    "hidden",
    "window",
    "bias",
    "beta",
    "max_epochs",
    "error_goal",
    "seed",
    "init_range",
];

/// Parsed configuration; records are still paths.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub mode: Mode,
    pub record: PathBuf,
    pub eval_record: Option<PathBuf>,
    pub omega: Option<f64>,
    pub damping_rate: f64,
    pub damped: bool,
    pub kernel: DampedFrequency,
    pub spectrum_damping: DampingSpec,
    pub sweep: Sweep,
    pub eval_step: f64,
    pub train_points: Option<usize>,
    pub train_fraction: Option<f64>,
    pub factors: Vec<f64>,
    pub hidden: usize,
    pub features: Features,
    pub trainer: TrainerConfig,
}

impl ExperimentConfig {
    /// Loads the referenced records and builds a validated spec.
    pub fn into_spec(self, base_dir: &Path) -> Result<ExperimentSpec> {
        let record = read_record_file(&base_dir.join(&self.record))?;
        let eval_record = match &self.eval_record {
            Some(p) => Some(read_record_file(&base_dir.join(p))?),
            None => None,
        };
        let omega = match (self.mode, self.omega) {
            (_, Some(w)) => w,
            (Mode::AccelToResponse, None) => {
                return Err(Error::usage("`omega` is required for accel_to_response"))
            }
            // Unused in period mode; the sweep sets ω per period.
            (Mode::PeriodToPeak, None) => 1.0,
        };
        let system = SdofSystem::new(omega, self.damping_rate)?.with_kernel(self.kernel)?;

        let train_points = match (self.train_points, self.train_fraction) {
            (Some(_), Some(_)) => {
                return Err(Error::usage("give only one of train_points and train_fraction"))
            }
            (Some(n), None) => Some(n),
            (None, Some(f)) => {
                if !(f > 0.0 && f <= 1.0) {
                    return Err(Error::usage(format!("train_fraction must be in (0, 1], got {f}")));
                }
                let total = match self.mode {
                    Mode::AccelToResponse => record.len(),
                    Mode::PeriodToPeak => self.sweep.periods()?.len(),
                };
                Some(((f * total as f64).round() as usize).max(1))
            }
            (None, None) => None,
        };

        let spec = ExperimentSpec {
            mode: self.mode,
            record,
            system,
            damped: self.damped,
            sweep: self.sweep,
            spectrum_damping: self.spectrum_damping,
            eval_record,
            eval_step: self.eval_step,
            train_points,
            factors: self.factors,
            hidden: self.hidden,
            features: self.features,
            trainer: self.trainer,
        };
        spec.validate()?;
        Ok(spec)
    }
}

pub fn parse_config<R: BufRead>(source: R) -> Result<ExperimentConfig> {
    let mut entries: BTreeMap<String, (usize, String)> = BTreeMap::new();
    for (idx, line) in source.lines().enumerate() {
        let line = line?;
        let no = idx + 1;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let (key, value) = text
            .split_once('=')
            .ok_or_else(|| Error::usage(format!("config line {no}: expected key=value, got `{text}`")))?;
        let key = key.trim();
        if !KEYS.contains(&key) {
            return Err(Error::usage(format!("config line {no}: unknown key `{key}`")));
        }
        if entries.insert(key.to_string(), (no, value.trim().to_string())).is_some() {
            return Err(Error::usage(format!("config line {no}: duplicate key `{key}`")));
        }
    }

    let mut take = |key: &str| entries.remove(key);
    let mode = match take("mode") {
        Some((no, v)) => v.parse::<Mode>().map_err(|e| at_line(no, e))?,
        None => return Err(Error::usage("config is missing `mode`")),
    };
    let record = match take("record") {
        Some((_, v)) => PathBuf::from(v),
        None => return Err(Error::usage("config is missing `record`")),
    };
    let defaults = TrainerConfig::default();
    let sweep_default = Sweep::default();

    let cfg = ExperimentConfig {
        mode,
        record,
        eval_record: take("eval_record").map(|(_, v)| PathBuf::from(v)),
        omega: opt(take("omega"))?,
        damping_rate: opt(take("damping_rate"))?.unwrap_or(0.0),
        damped: opt_bool(take("damped"))?.unwrap_or(false),
        kernel: opt(take("kernel"))?.unwrap_or_default(),
        spectrum_damping: opt(take("spectrum_damping"))?.unwrap_or(DampingSpec::Ratio(0.05)),
        sweep: Sweep {
            start: opt(take("period_start"))?.unwrap_or(sweep_default.start),
            stop: opt(take("period_stop"))?.unwrap_or(sweep_default.stop),
            step: opt(take("period_step"))?.unwrap_or(sweep_default.step),
        },
        eval_step: opt(take("eval_step"))?.unwrap_or(0.5),
        train_points: opt(take("train_points"))?,
        train_fraction: opt(take("train_fraction"))?,
        factors: match take("factors") {
            Some((no, v)) => v
                .split(',')
                .map(|f| parse_value::<f64>(no, f.trim()))
                .collect::<Result<Vec<_>>>()?,
            None => vec![1.0],
        },
        hidden: opt(take("hidden"))?.unwrap_or(10),
        features: Features {
            window: opt(take("window"))?.unwrap_or(1),
            bias: opt_bool(take("bias"))?.unwrap_or(false),
        },
        trainer: TrainerConfig {
            beta: opt(take("beta"))?.unwrap_or(defaults.beta),
            max_epochs: opt(take("max_epochs"))?.unwrap_or(defaults.max_epochs),
            error_goal: opt(take("error_goal"))?.unwrap_or(defaults.error_goal),
            seed: opt(take("seed"))?.unwrap_or(defaults.seed),
            init_range: opt(take("init_range"))?.unwrap_or(defaults.init_range),
        },
    };
    Ok(cfg)
}

fn at_line(no: usize, e: Error) -> Error {
    let detail = match e {
        Error::Usage(m) | Error::Domain(m) | Error::Input(m) | Error::Format(m) => m,
        other => other.to_string(),
    };
    Error::usage(format!("config line {no}: {detail}"))
}

fn parse_value<T: FromStr>(no: usize, v: &str) -> Result<T> {
    v.parse::<T>()
        .map_err(|_| Error::usage(format!("config line {no}: invalid value `{v}`")))
}

fn opt<T: FromStr>(entry: Option<(usize, String)>) -> Result<Option<T>> {
    entry.map(|(no, v)| parse_value(no, &v)).transpose()
}

fn opt_bool(entry: Option<(usize, String)>) -> Result<Option<bool>> {
    entry
        .map(|(no, v)| match v.as_str() {
            "true" | "1" | "yes" => Ok(true),
            "false" | "0" | "no" => Ok(false),
            _ => Err(Error::usage(format!("config line {no}: expected a boolean, got `{v}`"))),
        })
        .transpose()
}
