//! One-hidden-layer feedforward network trained by per-pattern error
//! back-propagation with bipolar sigmoid units.

mod ebpta;
mod gradcheck;
mod network;
mod persist;
mod train;

pub use ebpta::{apply_updates, hidden_deltas, output_deltas, pair_error};
pub use gradcheck::{analytic_gradient, gradient_check, gradient_check_with, Gradient};
pub use network::{bipolar_sigmoid, Activations, MlpNetwork};
pub use persist::{load_model, load_weights, save_model, save_weights};
pub use train::{cumulative_error, train, TrainReport, TrainerConfig, TrainingPair};
