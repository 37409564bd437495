//! File formats: ground-motion records, CSV tables, experiment configs, and
//! synthetic record generation.

mod config;
mod csv;
mod record_file;
mod synthetic;

pub use config::{parse_config, ExperimentConfig};
pub use csv::{read_csv, write_csv, CsvTable};
pub use record_file::{parse_record, read_record_file, write_record};
pub use synthetic::{generate_synthetic, SyntheticKind, SyntheticParams};

/// 17 significant digits, enough for an exact `f64` round trip.
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}
