//! Command-line front end. Every recipe is a subcommand; flags are mapped
//! onto an [`ExperimentConfig`] so a command line and a config file describe
//! the same run.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::{ExperimentConfig, Recipe};
use crate::error::{LabError, Result};
use crate::recipes::{self, Outcome};

#[derive(Debug, Parser)]
#[command(name = "ecg-lab", version, about = "Synthetic ECG denoising experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the recipe described by a config file.
    Run { config: PathBuf },
    /// Re-run a manifest and verify every recorded hash.
    Replay { manifest: PathBuf },
    /// Generate a synthetic ECG record.
    Synth(RecipeArgs),
    /// Add calibrated noise to a signal.
    AddNoise(RecipeArgs),
    /// Apply the classical filter chain or a single stage.
    Filter(RecipeArgs),
    /// Wavelet soft-threshold denoising.
    WaveletDenoise(RecipeArgs),
    /// Build a paired clean/noisy dataset directory.
    BuildDataset(RecipeArgs),
    /// Train the convolutional denoiser.
    Train(RecipeArgs),
    /// Denoise a signal with a trained network.
    Denoise(RecipeArgs),
    /// Train the RBM baseline.
    RbmTrain(RecipeArgs),
    /// Denoise a signal with a trained RBM.
    RbmDenoise(RecipeArgs),
    /// RMS and SNR of a prediction against a clean reference.
    Eval(RecipeArgs),
    /// Hyper-parameter sweep or fixture re-selection.
    Doe(RecipeArgs),
    /// Desk-scale single-record experiment.
    #[command(name = "reproduce-4.1")]
    Reproduce41(RecipeArgs),
    /// Desk-scale rest-to-effort experiment.
    #[command(name = "reproduce-4.5")]
    Reproduce45(RecipeArgs),
    /// Overlay up to three signals as SVG.
    Plot(RecipeArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct RecipeArgs {
    /// Start from this config file; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Input signal (`[inputs] input`).
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Output file (`[outputs] output`).
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Output directory (`[outputs] dir`).
    #[arg(long)]
    pub dir: Option<PathBuf>,
    /// Table of sweep results to re-select from (`[inputs] fixture`).
    #[arg(long)]
    pub fixture: Option<PathBuf>,
    /// Run a reproduction at desk scale (the default).
    #[arg(long, conflicts_with = "full_scale")]
    pub desk_scale: bool,
    /// Run a reproduction at the original dataset and training sizes.
    #[arg(long)]
    pub full_scale: bool,
    /// Any other input as `key=path`.
    #[arg(long = "in", value_name = "KEY=PATH")]
    pub extra_inputs: Vec<String>,
    /// Any config value as `section.key=value`.
    #[arg(long = "set", value_name = "SECTION.KEY=VALUE")]
    pub overrides: Vec<String>,
}

impl RecipeArgs {
    pub fn to_config(&self, recipe: Recipe) -> Result<ExperimentConfig> {
        let mut config = match &self.config {
            Some(path) => {
                let c = ExperimentConfig::load(path)?;
                if c.recipe != recipe {
                    return Err(LabError::config(format!(
                        "{} describes recipe `{}`, not `{}`",
                        path.display(),
                        c.recipe.name(),
                        recipe.name()
                    )));
                }
                c
            }
            None => ExperimentConfig::new(recipe, 0),
        };
        if let Some(seed) = self.seed {
            config.seed = seed;
        }
        if let Some(p) = &self.input {
            config.set("inputs", "input", p.display());
        }
        if let Some(p) = &self.output {
            config.set("outputs", "output", p.display());
        }
        if let Some(p) = &self.dir {
            config.set("outputs", "dir", p.display());
        }
        if let Some(p) = &self.fixture {
            config.set("inputs", "fixture", p.display());
        }
        if self.desk_scale {
            config.set("run", "scale", "desk");
        }
        if self.full_scale {
            config.set("run", "scale", "full");
        }
        for item in &self.extra_inputs {
            let (key, path) = split_pair(item, "--in")?;
            config.set("inputs", key, path);
        }
        for item in &self.overrides {
            let (path, value) = split_pair(item, "--set")?;
            let (section, key) = path
                .split_once('.')
                .ok_or_else(|| LabError::config(format!("--set `{item}` needs section.key=value")))?;
            config.set(section, key, value);
        }
        Ok(config)
    }
}

fn split_pair<'a>(item: &'a str, flag: &str) -> Result<(&'a str, &'a str)> {
    item.split_once('=')
        .map(|(k, v)| (k.trim(), v.trim()))
        .filter(|(k, _)| !k.is_empty())
        .ok_or_else(|| LabError::config(format!("{flag} `{item}` is not of the form key=value")))
}

impl Command {
    fn recipe(&self) -> Option<(Recipe, &RecipeArgs)> {
        let pair = match self {
            Command::Run { .. } | Command::Replay { .. } => return None,
            Command::Synth(a) => (Recipe::Synth, a),
            Command::AddNoise(a) => (Recipe::AddNoise, a),
            Command::Filter(a) => (Recipe::Filter, a),
            Command::WaveletDenoise(a) => (Recipe::WaveletDenoise, a),
            Command::BuildDataset(a) => (Recipe::BuildDataset, a),
            Command::Train(a) => (Recipe::Train, a),
            Command::Denoise(a) => (Recipe::Denoise, a),
            Command::RbmTrain(a) => (Recipe::RbmTrain, a),
            Command::RbmDenoise(a) => (Recipe::RbmDenoise, a),
            Command::Eval(a) => (Recipe::Eval, a),
            Command::Doe(a) => (Recipe::Doe, a),
            Command::Reproduce41(a) => (Recipe::Reproduce41, a),
            Command::Reproduce45(a) => (Recipe::Reproduce45, a),
            Command::Plot(a) => (Recipe::Plot, a),
        };
        Some(pair)
    }
}

/// Runs a parsed command line and returns the outcome.
pub fn dispatch(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Run { config } => {
            let config = ExperimentConfig::load(config)?;
            recipes::run(&config).map(|(o, _)| o)
        }
        Command::Replay { manifest } => recipes::replay(manifest),
        other => {
            let (recipe, args) = other.recipe().expect("recipe subcommand");
            recipes::run(&args.to_config(recipe)?).map(|(o, _)| o)
        }
    }
}

/// Parses `args`, runs, prints the summary and returns the exit status:
/// 0 on success, 2 for usage or configuration errors, 1 otherwise.
pub fn main_with_args<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(outcome) => {
            // A closed stdout (e.g. piped into `head`) is not a failure of the run.
            let mut out = std::io::stdout().lock();
            for (k, v) in &outcome.summary {
                let _ = writeln!(out, "{k}: {v}");
            }
            for f in &outcome.files {
                let _ = writeln!(out, "wrote {}", f.display());
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
