//! Instance generation, experiment orchestration, exponent fitting and
//! machine-readable output.

mod config;
mod experiment;
mod fit;
mod generate;
mod output;

pub use config::{default_s, load_config, parse_config, ExperimentConfig, OutputFormat};
pub use experiment::{
    approx, run_experiment, ExperimentResult, ExperimentRow, RowStatus, COLUMNS, CURVE_GUARD_N,
    Q_GUARD_N, TIMING_COLUMNS,
};
pub use fit::{fit_exponent, fit_rows, ExponentFit};
pub use generate::{arithmetic, generate_sets, Generator};
pub use output::{read_csv, read_json_lines, read_rows, write_csv, write_json_lines};
pub use crate::rng::SplitMix64;
