//! Experiment recipes: each reads an [`ExperimentConfig`], writes its
//! artifacts and reports the files it produced.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use ecg_lab_core::datasets::{
    build_effort_dataset, build_multi_record, build_single_record, holdout_record_eval, DatasetSpec, PairedDataset, Split,
};
use ecg_lab_core::doe::{run_cell, select_optimal, Grid, Knee, Objective, Selection, SelectionPolicy};
use ecg_lab_core::filters::{algorithm1, Stage};
use ecg_lab_core::metrics::{evaluate_dataset, rms, EvalReport};
use ecg_lab_core::neural::{CnnConfig, CnnModel, PoolMode, TrainTrace};
use ecg_lab_core::noise::{NoiseKind, NoiseSpec};
use ecg_lab_core::rng::substream;
use ecg_lab_core::rbm::{train_cd1, RbmConfig, RbmParams};
use ecg_lab_core::synth::{generate_ecg, generate_varying_record, single_beat, EcgModelParams};
use ecg_lab_core::wavelet::{wavelet_denoise, Family, WaveletSpec};
use ecg_lab_core::{Denoiser, Signal};
use rayon::prelude::*;

use crate::config::{ExperimentConfig, Recipe};
use crate::dataset_dir::{read_dataset, write_dataset};
use crate::error::{LabError, Result};
use crate::formats::{encode_cnn, encode_rbm, read_cnn, read_rbm, read_signal, write_file, write_signal};
use crate::manifest::{write_manifest, Manifest};
use crate::report::{doe_csv, eval_csv, parse_doe_csv, selection_csv};
use crate::scenarios::{chain_fixture, generate_record, record_specs};
use crate::svg::{doe_triptych, plot_signals};

/// Files a recipe wrote and a short human-readable summary.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Outcome {
    pub files: Vec<PathBuf>,
    pub summary: Vec<(String, String)>,
}

impl Outcome {
    fn note(&mut self, key: &str, value: impl ToString) {
        self.summary.push((key.to_string(), value.to_string()));
    }

    fn write(&mut self, path: PathBuf, bytes: &[u8]) -> Result<()> {
        write_file(&path, bytes)?;
        self.files.push(path);
        Ok(())
    }

    fn write_signal(&mut self, path: PathBuf, signal: &Signal) -> Result<()> {
        write_signal(&path, signal)?;
        self.files.push(path);
        Ok(())
    }

    pub fn summary_csv(&self) -> String {
        let mut out = String::from("key,value\n");
        for (k, v) in &self.summary {
            let _ = writeln!(out, "{k},{v}");
        }
        out
    }
}

/// Validates, executes and writes the manifest.
pub fn run(config: &ExperimentConfig) -> Result<(Outcome, PathBuf)> {
    config.validate()?;
    let outcome = execute(config)?;
    let manifest = write_manifest(config, &outcome.files)?;
    Ok((outcome, manifest))
}

/// Re-runs a manifest and checks that inputs and outputs hash as recorded.
pub fn replay(manifest_path: &Path) -> Result<Outcome> {
    let manifest = Manifest::load(manifest_path)?;
    manifest.check_inputs()?;
    let (outcome, _) = run(&manifest.config)?;
    manifest.check_outputs()?;
    Ok(outcome)
}

pub fn execute(config: &ExperimentConfig) -> Result<Outcome> {
    match config.recipe {
        Recipe::Synth => synth(config),
        Recipe::AddNoise => add_noise(config),
        Recipe::Filter => filter(config),
        Recipe::WaveletDenoise => wavelet(config),
        Recipe::BuildDataset => build_dataset(config),
        Recipe::Train => train(config),
        Recipe::Denoise => denoise(config),
        Recipe::RbmTrain => rbm_train(config),
        Recipe::RbmDenoise => rbm_denoise(config),
        Recipe::Eval => eval(config),
        Recipe::Doe => doe(config),
        Recipe::Reproduce41 => reproduce_41(config).map(|r| r.outcome),
        Recipe::Reproduce45 => reproduce_45(config).map(|r| r.outcome),
        Recipe::Plot => plot(config),
    }
}

fn synth_params(config: &ExperimentConfig) -> Result<EcgModelParams> {
    let p = EcgModelParams::default()
        .with_heart_rate(config.parse_or("synth", "heart_rate_bpm", 60.0)?)
        .with_voltage_scale(config.parse_or("synth", "voltage_scale", 2.0)?);
    p.validate()?;
    Ok(p)
}

fn synth(config: &ExperimentConfig) -> Result<Outcome> {
    let params = synth_params(config)?;
    let duration = config.parse_or("synth", "duration_s", 10.0)?;
    let fs = config.parse_or("synth", "fs", 360u32)?;
    let signal = match (config.get("synth", "rate_min"), config.get("synth", "rate_max")) {
        (None, None) => generate_ecg(&params, duration, fs)?,
        _ => {
            let lo = config.parse_or("synth", "rate_min", 60.0)?;
            let hi = config.parse_or("synth", "rate_max", 90.0)?;
            let segment = config.parse_or("synth", "segment_s", 10.0)?;
            generate_varying_record(&params, duration, segment, (lo, hi), fs, config.seed)?
        }
    };
    let mut out = Outcome::default();
    out.note("samples", signal.len());
    out.write_signal(config.output("output")?, &signal)?;
    Ok(out)
}

fn noise_kind(config: &ExperimentConfig) -> Result<NoiseKind> {
    match config.get("noise", "kind").unwrap_or("random_plus_drift") {
        "random" => Ok(NoiseKind::Random),
        "drift" => Ok(NoiseKind::Drift),
        "random_plus_drift" => Ok(NoiseKind::RandomPlusDrift),
        "recorded" => Ok(NoiseKind::Recorded(read_signal(&config.input("noise")?)?)),
        other => Err(LabError::config(format!("unknown noise kind `{other}`"))),
    }
}

fn add_noise(config: &ExperimentConfig) -> Result<Outcome> {
    let clean = read_signal(&config.input("input")?)?;
    let spec = NoiseSpec {
        kind: noise_kind(config)?,
        target_snr_db: config.parse_or("noise", "snr_db", 0.0)?,
        seed: config.seed,
    };
    let noisy = spec.apply(&clean)?;
    let mut out = Outcome::default();
    out.note("snr_db", spec.target_snr_db);
    out.write_signal(config.output("output")?, &noisy)?;
    Ok(out)
}

fn filter(config: &ExperimentConfig) -> Result<Outcome> {
    if let Some(n) = config.get("filter", "bench") {
        let n: usize = n
            .parse()
            .map_err(|_| LabError::config("[filter] bench must be a fixture count"))?;
        return chain_bench(config, n);
    }
    let input = read_signal(&config.input("input")?)?;
    let mut out = Outcome::default();
    let filtered = match config.get("filter", "stage") {
        Some(name) => {
            let stage = Stage::from_name(name)
                .ok_or_else(|| LabError::config(format!("unknown filter stage `{name}`")))?;
            stage.apply(&input)?
        }
        None => match config.get("filter", "chain").unwrap_or("algorithm1") {
            "algorithm1" => algorithm1(&input)?,
            other => return Err(LabError::config(format!("unknown filter chain `{other}`"))),
        },
    };
    if let Some(path) = config.get("outputs", "coeffs") {
        let mut csv = String::from("stage,kind,b,a\n");
        for stage in Stage::CHAIN {
            if let Some(design) = stage.design(input.fs()) {
                let f = design?;
                let join = |v: &[f64]| v.iter().map(f64::to_string).collect::<Vec<_>>().join(" ");
                let _ = writeln!(csv, "{},{:?},{},{}", stage.name(), f.design.kind, join(&f.b), join(&f.a));
            }
        }
        out.write(PathBuf::from(path), csv.as_bytes())?;
    }
    out.write_signal(config.output("output")?, &filtered)?;
    Ok(out)
}

/// Runs the classical chain over synthetic fixtures and records RMS before and after.
pub fn chain_bench(config: &ExperimentConfig, fixtures: usize) -> Result<Outcome> {
    let dir = config.output("dir")?;
    let mut csv = String::from("fixture,input_rms_mv,output_rms_mv,improved\n");
    let mut improved = 0;
    for i in 0..fixtures {
        let (clean, noisy) = chain_fixture(i, config.seed)?;
        let before = rms(&clean, &noisy)?;
        let after = rms(&clean, &algorithm1(&noisy)?)?;
        let better = after < before;
        improved += usize::from(better);
        let _ = writeln!(csv, "{i},{before},{after},{}", u8::from(better));
    }
    let mut out = Outcome::default();
    out.note("fixtures", fixtures);
    out.note("improved", improved);
    out.write(dir.join("chain_bench.csv"), csv.as_bytes())?;
    Ok(out)
}

fn wavelet(config: &ExperimentConfig) -> Result<Outcome> {
    let input = read_signal(&config.input("input")?)?;
    let name = config.get("wavelet", "family").unwrap_or("sym4");
    let family = Family::from_name(name).ok_or_else(|| LabError::config(format!("unknown wavelet `{name}`")))?;
    let spec = WaveletSpec::new(family);
    let levels = config.parse_or("wavelet", "levels", spec.default_levels(input.len()))?;
    let mut out = Outcome::default();
    out.write_signal(config.output("output")?, &wavelet_denoise(&input, &spec, levels)?)?;
    Ok(out)
}

fn dataset_spec(config: &ExperimentConfig, windows: usize) -> Result<DatasetSpec> {
    Ok(DatasetSpec {
        window_s: config.parse_or("dataset", "window_s", 1.0)?,
        windows: config.parse_or("dataset", "windows", windows)?,
        snr_levels_db: config.list_or("dataset", "snr_levels", &[-6.0, 0.0, 6.0, 12.0])?,
        noise: noise_kind(config)?,
        noise_draws: config.parse_or("dataset", "noise_draws", 1)?,
        seed: config.seed,
    })
}

/// The single-record recipe: an input record if given, otherwise a
/// synthetic record at 6 mV peak-to-peak with its rate varying in 60–90 bpm.
fn single_record_dataset(config: &ExperimentConfig, default_windows: usize) -> Result<PairedDataset> {
    let spec = dataset_spec(config, default_windows)?;
    let record = match config.get("inputs", "record") {
        Some(path) => read_signal(Path::new(path))?,
        None => {
            let params = EcgModelParams::default().with_voltage_scale(config.parse_or("synth", "voltage_scale", 6.0)?);
            let lo = config.parse_or("synth", "rate_min", 60.0)?;
            let hi = config.parse_or("synth", "rate_max", 90.0)?;
            let duration = spec.window_s * spec.windows as f64;
            generate_varying_record(&params, duration, 10.0, (lo, hi), 360, config.seed)?
        }
    };
    Ok(build_single_record("record", &record, &spec)?)
}

fn effort_dataset(config: &ExperimentConfig, default_windows: usize) -> Result<PairedDataset> {
    let spec = dataset_spec(config, default_windows)?;
    let params = EcgModelParams::default().with_voltage_scale(config.parse_or("synth", "voltage_scale", 6.0)?);
    let rest = single_beat(&params.with_heart_rate(config.parse_or("synth", "rest_bpm", 60.0)?), 360)?;
    let rates = config.list_or("dataset", "rates_bpm", &[72.0, 78.0, 84.0, 90.0])?;
    Ok(build_effort_dataset(&rest, &rates, &spec)?)
}

fn build_dataset(config: &ExperimentConfig) -> Result<Outcome> {
    let ds = match config.get("dataset", "kind").unwrap_or("single") {
        "single" => single_record_dataset(config, 100)?,
        "effort" => effort_dataset(config, 50)?,
        other => return Err(LabError::config(format!("unknown dataset kind `{other}`"))),
    };
    let mut out = Outcome::default();
    out.note("pairs", ds.len());
    out.note("train", ds.train.len());
    out.note("test", ds.test.len());
    out.files = write_dataset(&config.output("dir")?, &ds)?;
    Ok(out)
}

/// Network settings from `[cnn]`, with `epochs` and `batch_size` defaults
/// supplied by the recipe.
pub fn cnn_config(config: &ExperimentConfig, epochs: usize, batch_size: usize) -> Result<CnnConfig> {
    let d = CnnConfig::default();
    let pool_mode = match config.get("cnn", "pool").unwrap_or("subsample") {
        "subsample" => PoolMode::Subsample,
        "mean" => PoolMode::Mean,
        other => return Err(LabError::config(format!("unknown pool mode `{other}`"))),
    };
    let cfg = CnnConfig {
        input_len: config.parse_or("cnn", "input_len", d.input_len)?,
        num_conv_layers: config.parse_or("cnn", "layers", d.num_conv_layers)?,
        filters_per_layer: config.parse_or("cnn", "filters", d.filters_per_layer)?,
        kernel_len: config.parse_or("cnn", "kernel", d.kernel_len)?,
        pool_stride: config.parse_or("cnn", "pool_stride", d.pool_stride)?,
        pool_mode,
        learning_rate: config.parse_or("cnn", "learning_rate", d.learning_rate)?,
        grad_clip_norm: config.parse_or("cnn", "grad_clip", d.grad_clip_norm)?,
        batch_size: config.parse_or("cnn", "batch_size", batch_size)?,
        epochs: config.parse_or("cnn", "epochs", epochs)?,
        seed: config.seed,
    };
    cfg.validate().map_err(|e| LabError::config(e.to_string()))?;
    Ok(cfg)
}

pub fn train_on_split(ds: &PairedDataset, cfg: CnnConfig) -> Result<(CnnModel, TrainTrace)> {
    let idx = ds.indices(Split::Train);
    let noisy: Vec<&[f64]> = idx.iter().map(|&i| ds.noisy[i].samples()).collect();
    let clean: Vec<&[f64]> = idx.iter().map(|&i| ds.clean[i].samples()).collect();
    Ok(CnnModel::train(cfg, &noisy, &clean)?)
}

fn train(config: &ExperimentConfig) -> Result<Outcome> {
    let ds = read_dataset(&config.input("dataset")?, config.seed)?;
    let (model, trace) = train_on_split(&ds, cnn_config(config, 40, 32)?)?;
    let mut out = Outcome::default();
    out.note("epochs", trace.epoch_loss.len());
    if let Some(loss) = trace.epoch_loss.last() {
        out.note("final_loss", loss);
    }
    out.write(config.output("output")?, &encode_cnn(&model))?;
    if let Some(path) = config.get("outputs", "report") {
        out.write(PathBuf::from(path), eval_csv(&ds.evaluate(&model, Split::Test)?).as_bytes())?;
    }
    Ok(out)
}

fn denoise(config: &ExperimentConfig) -> Result<Outcome> {
    let model = read_cnn(&config.input("model")?)?;
    let noisy = read_signal(&config.input("input")?)?;
    let mut out = Outcome::default();
    out.write_signal(config.output("output")?, &model.denoise(&noisy)?)?;
    Ok(out)
}

pub fn rbm_config(config: &ExperimentConfig) -> Result<RbmConfig> {
    let d = RbmConfig::default();
    Ok(RbmConfig {
        n_hidden: config.parse_or("rbm", "hidden", d.n_hidden)?,
        learning_rate: config.parse_or("rbm", "learning_rate", d.learning_rate)?,
        epochs: config.parse_or("rbm", "epochs", d.epochs)?,
        batch_size: config.parse_or("rbm", "batch_size", d.batch_size)?,
        seed: config.seed,
    })
}

/// Clean training windows, each min-max scaled to [0, 1].
pub fn rbm_training_windows(ds: &PairedDataset) -> Result<Vec<Vec<f64>>> {
    ds.indices(Split::Train)
        .into_iter()
        .map(|i| Ok(ds.clean[i].minmax_scale(0.0, 1.0)?.0.into_samples()))
        .collect()
}

fn rbm_train(config: &ExperimentConfig) -> Result<Outcome> {
    let ds = read_dataset(&config.input("dataset")?, config.seed)?;
    let (params, trace) = train_cd1(&rbm_training_windows(&ds)?, &rbm_config(config)?)?;
    let mut out = Outcome::default();
    if let Some(e) = trace.epoch_recon_error.last() {
        out.note("final_recon_error", e);
    }
    out.write(config.output("output")?, &encode_rbm(&params))?;
    Ok(out)
}

fn rbm_denoise(config: &ExperimentConfig) -> Result<Outcome> {
    let params: RbmParams = read_rbm(&config.input("model")?)?;
    let noisy = read_signal(&config.input("input")?)?;
    let mut out = Outcome::default();
    out.write_signal(config.output("output")?, &params.denoise(&noisy)?)?;
    Ok(out)
}

fn eval(config: &ExperimentConfig) -> Result<Outcome> {
    let clean = read_signal(&config.input("clean")?)?;
    let pred = read_signal(&config.input("pred")?)?;
    let (clean, pred) = match config.get("eval", "window_s") {
        None => (vec![clean], vec![pred]),
        Some(w) => {
            let w: f64 = w.parse().map_err(|_| LabError::config("[eval] window_s must be a number"))?;
            (clean.segment(w)?, pred.segment(w)?)
        }
    };
    let report = evaluate_dataset(clean.iter().zip(&pred))?;
    let mut out = Outcome::default();
    out.note("avg_rms_mv", report.avg_rms_mv);
    out.note("avg_snr_db", report.avg_snr_db);
    out.write(config.output("output")?, eval_csv(&report).as_bytes())?;
    Ok(out)
}

fn plot(config: &ExperimentConfig) -> Result<Outcome> {
    let paths = config.require("inputs", "signals")?;
    let signals = paths
        .split(',')
        .map(|p| read_signal(Path::new(p.trim())))
        .collect::<Result<Vec<_>>>()?;
    let labels: Vec<String> = config.list_or("plot", "labels", &[])?;
    let named: Vec<(&str, &Signal)> = signals
        .iter()
        .enumerate()
        .map(|(i, s)| (labels.get(i).map(String::as_str).unwrap_or("signal"), s))
        .collect();
    let mut out = Outcome::default();
    out.write(config.output("output")?, plot_signals(&named)?.as_bytes())?;
    Ok(out)
}

fn selection_policy(config: &ExperimentConfig, default_knee: Knee) -> Result<SelectionPolicy> {
    let knee = match (config.get("doe", "knee_sim"), config.get("doe", "knee_rms")) {
        (Some(_), _) => Knee::FromSimId(config.parse_or("doe", "knee_sim", 1)?),
        (None, Some(_)) => Knee::FirstRmsBelow(config.parse_or("doe", "knee_rms", 0.14)?),
        (None, None) => default_knee,
    };
    let objective = match config.get("doe", "objective").unwrap_or("rms-time-snr") {
        "rms-time-snr" => Objective::RmsTimeSnr,
        "rms-snr-time" => Objective::RmsSnrTime,
        other => return Err(LabError::config(format!("unknown objective `{other}`"))),
    };
    Ok(SelectionPolicy {
        knee,
        time_threshold_s: config.parse_or("doe", "threshold_s", 5000.0)?,
        time_tolerance: config.parse_or("doe", "tolerance", 0.05)?,
        objective,
    })
}

/// Worker count: `ECG_LAB_WORKERS`, then `[doe] workers`, then 1.
pub fn doe_workers(config: &ExperimentConfig) -> Result<usize> {
    let n = match std::env::var("ECG_LAB_WORKERS") {
        Ok(v) => v
            .parse()
            .map_err(|_| LabError::config(format!("ECG_LAB_WORKERS=`{v}` is not a count")))?,
        Err(_) => config.parse_or("doe", "workers", 1usize)?,
    };
    Ok(n.max(1))
}

fn doe(config: &ExperimentConfig) -> Result<Outcome> {
    let dir = config.output("dir")?;
    let (rows, default_knee) = match config.get("inputs", "fixture") {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(LabError::io(path))?;
            (parse_doe_csv(&text, Path::new(path))?, Knee::FirstRmsBelow(0.14))
        }
        None => {
            let ds = single_record_dataset(config, 40)?;
            let grid = Grid {
                filters: config.list_or("doe", "filters", &[16, 36])?,
                kernel_lens: config.list_or("doe", "kernels", &[9, 23])?,
            };
            let base = cnn_config(config, 5, 32)?;
            let cells = grid.cells()?;
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(doe_workers(config)?)
                .build()
                .map_err(|e| LabError::config(e.to_string()))?;
            let rows = pool.install(|| {
                cells
                    .par_iter()
                    .enumerate()
                    .map(|(i, &(f, k))| {
                        let start = Instant::now();
                        let clock = move || start.elapsed().as_secs_f64();
                        run_cell(i, f, k, &ds, &base, &clock)
                    })
                    .collect::<std::result::Result<Vec<_>, _>>()
            })?;
            (rows, Knee::FromSimId(1))
        }
    };
    let policy = selection_policy(config, default_knee)?;
    let selection: Option<Selection> = select_optimal(&rows, &policy).ok();
    let mut out = Outcome::default();
    out.note("rows", rows.len());
    if let Some(s) = &selection {
        out.note("best_sim", s.best.sim_id);
        out.note("shortlist", s.shortlist.len());
    }
    out.write(dir.join("doe.csv"), doe_csv(&rows).as_bytes())?;
    out.write(dir.join("selection.csv"), selection_csv(&rows, selection.as_ref()).as_bytes())?;
    let [rms_svg, snr_svg, time_svg] = doe_triptych(&rows);
    out.write(dir.join("doe_rms.svg"), rms_svg.as_bytes())?;
    out.write(dir.join("doe_snr.svg"), snr_svg.as_bytes())?;
    out.write(dir.join("doe_time.svg"), time_svg.as_bytes())?;
    Ok(out)
}

/// Everything a desk-scale reproduction produced, for further checks.
pub struct Reproduction {
    pub dataset: PairedDataset,
    pub model: CnnModel,
    pub trace: TrainTrace,
    pub noisy: EvalReport,
    pub denoised: EvalReport,
    pub outcome: Outcome,
}

/// Default sizes of a reproduction run, chosen by `[run] scale`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Scale {
    pub windows: usize,
    pub epochs: usize,
    pub batch_size: usize,
}

impl Scale {
    /// `desk` fits a single CPU core in minutes; `full` uses the original
    /// dataset sizes and training length.
    pub fn from_config(config: &ExperimentConfig, desk_windows: usize, full_windows: usize) -> Result<Self> {
        match config.get("run", "scale").unwrap_or("desk") {
            "desk" => Ok(Scale { windows: desk_windows, epochs: 40, batch_size: 32 }),
            "full" => Ok(Scale { windows: full_windows, epochs: 6000, batch_size: 200 }),
            other => Err(LabError::config(format!("unknown scale `{other}`"))),
        }
    }
}

fn train_and_report(config: &ExperimentConfig, dataset: PairedDataset, scale: Scale) -> Result<Reproduction> {
    let dir = config.output("dir")?;
    let (model, trace) = train_on_split(&dataset, cnn_config(config, scale.epochs, scale.batch_size)?)?;
    let noisy = dataset.noisy_report(Split::Test)?;
    let denoised = dataset.evaluate(&model, Split::Test)?;
    let mut out = Outcome::default();
    out.note("pairs", dataset.len());
    out.note("train", dataset.train.len());
    out.note("test", dataset.test.len());
    out.note("epochs", trace.epoch_loss.len());
    out.note("final_loss", trace.epoch_loss.last().copied().unwrap_or(f64::NAN));
    out.note("noisy_avg_snr_db", noisy.avg_snr_db);
    out.note("denoised_avg_snr_db", denoised.avg_snr_db);
    out.note("snr_gain_db", denoised.avg_snr_db - noisy.avg_snr_db);
    out.note("denoised_avg_rms_mv", denoised.avg_rms_mv);
    out.note("pass_fraction", denoised.pass_fraction);
    out.write(dir.join("model.cnn1"), &encode_cnn(&model))?;
    out.write(dir.join("report.csv"), eval_csv(&denoised).as_bytes())?;
    out.write(dir.join("noisy_report.csv"), eval_csv(&noisy).as_bytes())?;
    let first = dataset.test[0];
    let clean = &dataset.clean[first];
    let noisy_sig = &dataset.noisy[first];
    let cleaned = model.denoise(noisy_sig)?;
    let svg = plot_signals(&[("clean", clean), ("noisy", noisy_sig), ("denoised", &cleaned)])?;
    out.write(dir.join("plot.svg"), svg.as_bytes())?;
    let summary = out.summary_csv();
    out.write(dir.join("summary.csv"), summary.as_bytes())?;
    Ok(Reproduction {
        dataset,
        model,
        trace,
        noisy,
        denoised,
        outcome: out,
    })
}

/// Single-record reproduction: one-second windows (100 at desk scale) at four SNRs.
pub fn reproduce_41(config: &ExperimentConfig) -> Result<Reproduction> {
    let scale = Scale::from_config(config, 100, 720)?;
    train_and_report(config, single_record_dataset(config, scale.windows)?, scale)
}

/// Rest-to-effort reproduction: one resting beat stretched to four elevated
/// rates, with 50 windows per rate at desk scale, at four SNRs.
pub fn reproduce_45(config: &ExperimentConfig) -> Result<Reproduction> {
    let scale = Scale::from_config(config, 50, 891)?;
    train_and_report(config, effort_dataset(config, scale.windows)?, scale)
}

/// In-distribution test scores and scores on a record never seen in training.
pub struct HoldoutResult {
    pub in_distribution: EvalReport,
    pub holdout: EvalReport,
}

/// Trains on the three similar synthetic records and scores the fourth,
/// deliberately different one.
pub fn holdout_experiment(config: &ExperimentConfig) -> Result<HoldoutResult> {
    let windows: usize = config.parse_or("dataset", "windows", 40)?;
    let spec = dataset_spec(config, windows)?;
    let duration = spec.window_s * spec.windows as f64;
    let [a, b, c, unseen] = record_specs();
    let train_records = [a, b, c]
        .iter()
        .enumerate()
        .map(|(i, r)| Ok((r.id.to_string(), generate_record(r, duration, substream(config.seed, i as u64))?)))
        .collect::<Result<Vec<_>>>()?;
    let trained_on = build_multi_record(&train_records, &spec)?;
    let held = generate_record(&unseen, duration, substream(config.seed, 3))?;
    let holdout = build_single_record(unseen.id, &held, &spec)?;
    let (model, _) = train_on_split(&trained_on, cnn_config(config, 40, 32)?)?;
    Ok(HoldoutResult {
        in_distribution: trained_on.evaluate(&model, Split::Test)?,
        holdout: holdout_record_eval(&model, &trained_on, &holdout)?,
    })
}
