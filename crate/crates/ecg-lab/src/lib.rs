//! File formats, experiment recipes, reports and the command line of the
//! ECG denoising lab. The numerics live in `ecg-lab-core`.

pub mod cli;
pub mod config;
pub mod dataset_dir;
pub mod error;
pub mod formats;
pub mod manifest;
pub mod recipes;
pub mod report;
pub mod scenarios;
pub mod svg;

pub use config::{ExperimentConfig, Recipe};
pub use error::{LabError, Result};
