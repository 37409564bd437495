//! Data sets, normalization, and the train/predict/evaluate experiments.

mod dataset;
mod experiment;
mod normalization;

pub use dataset::{
    build_accel_response_set, build_spectrum_set, desired_response, truncate_for_training,
    Features, TrainingSet, MAX_WINDOW,
};
pub use experiment::{
    predict_history, predict_spectrum, relative_rms, round_sig, run_experiment, train_surrogate,
    Evaluation, ExperimentResult, ExperimentSpec, Metrics, Mode, Sweep, MAX_HIDDEN,
};
pub use normalization::{Normalization, NORMALIZED_BOUND};
