//! Paired clean/noisy window datasets with seeded 3:1 train/test splits.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::metrics::{EvalReport, SignalMetrics};
use crate::noise::{scale_noise_to_snr, NoiseKind};
use crate::rng::{derive_seed, substream, tag, SplitMix64};
use crate::synth::generate_effort_family;
use crate::{Denoiser, Error, Result, Signal};

#[derive(Debug, Clone, PartialEq)]
pub struct PairMeta {
    pub record_id: String,
    pub snr_db: f64,
    /// Heart rate of the source, when known.
    pub beat_rate_bpm: Option<f64>,
    /// Index of the window within its source.
    pub window: usize,
}

/// How pairs are cut and corrupted.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetSpec {
    pub window_s: f64,
    /// Windows taken from the start of each source.
    pub windows: usize,
    pub snr_levels_db: Vec<f64>,
    pub noise: NoiseKind,
    /// Independent noise realisations per (window, level).
    pub noise_draws: usize,
    pub seed: u64,
}

impl DatasetSpec {
    pub fn new(windows: usize, snr_levels_db: &[f64], noise: NoiseKind, seed: u64) -> Self {
        Self {
            window_s: 1.0,
            windows,
            snr_levels_db: snr_levels_db.to_vec(),
            noise,
            noise_draws: 1,
            seed,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.snr_levels_db.is_empty() {
            return Err(Error::Empty("SNR levels"));
        }
        if self.snr_levels_db.iter().any(|s| !s.is_finite()) {
            return Err(Error::NonFinite("SNR level"));
        }
        if self.windows == 0 || self.noise_draws == 0 {
            return Err(Error::invalid("window and noise draw counts must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Split {
    Train,
    Test,
    All,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairedDataset {
    pub clean: Vec<Signal>,
    pub noisy: Vec<Signal>,
    pub meta: Vec<PairMeta>,
    pub train: Vec<usize>,
    pub test: Vec<usize>,
    pub seed: u64,
}

impl PairedDataset {
    /// Wraps aligned pairs and draws a seeded split with a quarter held out.
    pub fn from_pairs(clean: Vec<Signal>, noisy: Vec<Signal>, meta: Vec<PairMeta>, seed: u64) -> Result<Self> {
        if clean.len() != noisy.len() || clean.len() != meta.len() {
            return Err(Error::LengthMismatch {
                expected: clean.len(),
                actual: noisy.len().min(meta.len()),
            });
        }
        if clean.is_empty() {
            return Err(Error::Empty("dataset"));
        }
        for (c, n) in clean.iter().zip(&noisy) {
            c.check_compatible(n)?;
        }
        let (train, test) = split_indices(clean.len(), seed);
        Ok(Self {
            clean,
            noisy,
            meta,
            train,
            test,
            seed,
        })
    }

    /// Wraps aligned pairs with an explicit split, which must partition the indices.
    pub fn with_split(
        clean: Vec<Signal>,
        noisy: Vec<Signal>,
        meta: Vec<PairMeta>,
        train: Vec<usize>,
        test: Vec<usize>,
        seed: u64,
    ) -> Result<Self> {
        let mut ds = Self::from_pairs(clean, noisy, meta, seed)?;
        let mut seen = alloc::vec![false; ds.len()];
        for &i in train.iter().chain(&test) {
            match seen.get_mut(i) {
                Some(s) if !*s => *s = true,
                _ => return Err(Error::invalid("split indices must partition the dataset")),
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::invalid("split indices must cover the dataset"));
        }
        ds.train = train;
        ds.test = test;
        Ok(ds)
    }

    pub fn len(&self) -> usize {
        self.clean.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clean.is_empty()
    }

    pub fn indices(&self, split: Split) -> Vec<usize> {
        match split {
            Split::Train => self.train.clone(),
            Split::Test => self.test.clone(),
            Split::All => (0..self.len()).collect(),
        }
    }

    /// `(clean, noisy)` references for a split, in split order.
    pub fn pairs(&self, split: Split) -> Vec<(&Signal, &Signal)> {
        self.indices(split)
            .into_iter()
            .map(|i| (&self.clean[i], &self.noisy[i]))
            .collect()
    }

    pub fn record_ids(&self) -> BTreeSet<&str> {
        self.meta.iter().map(|m| m.record_id.as_str()).collect()
    }

    /// Noisy inputs scored against the clean references, i.e. doing nothing.
    pub fn noisy_report(&self, split: Split) -> Result<EvalReport> {
        report(self.pairs(split).into_iter().map(|(c, n)| SignalMetrics::measure(c, n)))
    }

    /// Denoises every noisy window of a split and scores it.
    pub fn evaluate<D: Denoiser + ?Sized>(&self, model: &D, split: Split) -> Result<EvalReport> {
        report(
            self.pairs(split)
                .into_iter()
                .map(|(c, n)| SignalMetrics::measure(c, &model.denoise(n)?)),
        )
    }
}

fn report(metrics: impl Iterator<Item = Result<SignalMetrics>>) -> Result<EvalReport> {
    EvalReport::from_metrics(metrics.collect::<Result<Vec<_>>>()?)
}

/// Seeded shuffle of `0..n`; the first `n / 4` shuffled indices form the
/// test split, the rest the training split (both returned sorted).
pub fn split_indices(n: usize, seed: u64) -> (Vec<usize>, Vec<usize>) {
    let mut order: Vec<usize> = (0..n).collect();
    SplitMix64::new(derive_seed(seed, tag::DATASET)).shuffle(&mut order);
    let mut test = order[..n / 4].to_vec();
    let mut train = order[n / 4..].to_vec();
    test.sort_unstable();
    train.sort_unstable();
    (train, test)
}

struct Source<'a> {
    id: &'a str,
    signal: &'a Signal,
    rate: Option<f64>,
}

fn build(sources: &[Source<'_>], spec: &DatasetSpec) -> Result<PairedDataset> {
    spec.validate()?;
    let noise_seed = derive_seed(spec.seed, tag::NOISE);
    let mut clean = Vec::new();
    let mut noisy = Vec::new();
    let mut meta = Vec::new();
    let mut item = 0u64;
    for src in sources {
        let windows = src.signal.segment(spec.window_s)?;
        if windows.len() < spec.windows {
            let per = src.signal.window_samples(spec.window_s)?;
            return Err(Error::TooShort {
                needed: per * spec.windows - 1,
                actual: src.signal.len(),
            });
        }
        for (w, window) in windows.into_iter().take(spec.windows).enumerate() {
            for &snr in &spec.snr_levels_db {
                for _ in 0..spec.noise_draws {
                    let noise = spec
                        .noise
                        .realise(window.len(), window.fs(), substream(noise_seed, item))?;
                    item += 1;
                    noisy.push(scale_noise_to_snr(&window, &noise, snr)?);
                    clean.push(window.clone());
                    meta.push(PairMeta {
                        record_id: src.id.to_string(),
                        snr_db: snr,
                        beat_rate_bpm: src.rate,
                        window: w,
                    });
                }
            }
        }
    }
    PairedDataset::from_pairs(clean, noisy, meta, spec.seed)
}

/// Windows of one record × SNR levels × noise draws.
pub fn build_single_record(record_id: &str, record: &Signal, spec: &DatasetSpec) -> Result<PairedDataset> {
    build(
        &[Source {
            id: record_id,
            signal: record,
            rate: None,
        }],
        spec,
    )
}

/// The same recipe over several records; ids must be unique.
pub fn build_multi_record(records: &[(String, Signal)], spec: &DatasetSpec) -> Result<PairedDataset> {
    let mut seen = BTreeSet::new();
    for (id, _) in records {
        if !seen.insert(id.as_str()) {
            return Err(Error::DuplicateRecord(id.clone()));
        }
    }
    let sources: Vec<Source<'_>> = records
        .iter()
        .map(|(id, s)| Source {
            id,
            signal: s,
            rate: None,
        })
        .collect();
    build(&sources, spec)
}

/// Multi-rate signals synthesised from one resting beat, `spec.windows`
/// windows per rate.
pub fn build_effort_dataset(rest_beat: &Signal, rates_bpm: &[f64], spec: &DatasetSpec) -> Result<PairedDataset> {
    if rates_bpm.is_empty() {
        return Err(Error::Empty("heart rates"));
    }
    let duration = spec.window_s * spec.windows as f64;
    let family = generate_effort_family(rest_beat, rates_bpm, rest_beat.fs(), duration)?;
    let ids: Vec<String> = rates_bpm.iter().map(|r| alloc::format!("effort-{r}bpm")).collect();
    let sources: Vec<Source<'_>> = family
        .iter()
        .zip(rates_bpm)
        .zip(&ids)
        .map(|((signal, &rate), id)| Source {
            id,
            signal,
            rate: Some(rate),
        })
        .collect();
    build(&sources, spec)
}

/// Scores `model` on every pair of `holdout`, refusing records that the
/// training dataset contains.
pub fn holdout_record_eval<D: Denoiser + ?Sized>(
    model: &D,
    trained_on: &PairedDataset,
    holdout: &PairedDataset,
) -> Result<EvalReport> {
    let seen = trained_on.record_ids();
    if let Some(id) = holdout.record_ids().into_iter().find(|id| seen.contains(id)) {
        return Err(Error::Leakage(id.to_string()));
    }
    holdout.evaluate(model, Split::All)
}
