//! Noise generation and exact SNR calibration.
//!
//! SNR is always the total power ratio `Σ clean² / Σ (g·noise)²`, so the
//! metrics module measures back exactly the level that was requested.

use alloc::vec::Vec;
use core::f64::consts::PI;

// Unused when std is linked, whose inherent float methods take precedence.
#[allow(unused_imports)]
use num_traits::Float;

use crate::rng::{derive_seed, tag, SplitMix64};
use crate::{Error, Result, Signal};

#[derive(Debug, Clone, PartialEq)]
pub enum NoiseKind {
    /// Zero-mean unit-variance white Gaussian noise.
    Random,
    /// Slow baseline drift (sub-0.5 Hz sinusoid mixture).
    Drift,
    /// White noise plus drift of equal power.
    RandomPlusDrift,
    /// Segments of a recorded noise signal, tiled as needed.
    Recorded(Signal),
}

impl NoiseKind {
    pub fn name(&self) -> &'static str {
        match self {
            NoiseKind::Random => "random",
            NoiseKind::Drift => "drift",
            NoiseKind::RandomPlusDrift => "random_plus_drift",
            NoiseKind::Recorded(_) => "recorded",
        }
    }

    /// An unscaled noise realisation of `len` samples.
    pub fn realise(&self, len: usize, fs: u32, seed: u64) -> Result<Signal> {
        match self {
            NoiseKind::Random => random_noise(len, fs, seed),
            NoiseKind::Drift => drift_noise(len, fs, seed),
            NoiseKind::RandomPlusDrift => {
                let white = random_noise(len, fs, seed)?;
                let drift = drift_noise(len, fs, seed.rotate_left(17))?;
                white.add(&drift)
            }
            NoiseKind::Recorded(source) => {
                if source.fs() != fs {
                    return Err(Error::RateMismatch(source.fs(), fs));
                }
                let mut rng = SplitMix64::new(derive_seed(seed, tag::NOISE));
                let offset = rng.below(source.len());
                tile_from(source, offset, len)
            }
        }
    }
}

/// Noise recipe: what to add and at which SNR.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseSpec {
    pub kind: NoiseKind,
    pub target_snr_db: f64,
    pub seed: u64,
}

impl NoiseSpec {
    pub fn apply(&self, clean: &Signal) -> Result<Signal> {
        let noise = self.kind.realise(clean.len(), clean.fs(), self.seed)?;
        scale_noise_to_snr(clean, &noise, self.target_snr_db)
    }
}

/// Amplitude gain that puts `noise` at `target_snr_db` below `clean`.
pub fn snr_gain(clean: &Signal, noise: &Signal, target_snr_db: f64) -> Result<f64> {
    clean.check_compatible(noise)?;
    if !target_snr_db.is_finite() {
        return Err(Error::NonFinite("target SNR"));
    }
    let pc = clean.power();
    let pn = noise.power();
    if pc == 0.0 {
        return Err(Error::ZeroPower("clean signal"));
    }
    if pn == 0.0 {
        return Err(Error::ZeroPower("noise"));
    }
    Ok((pc / (pn * 10.0.powf(target_snr_db / 10.0))).sqrt())
}

/// `clean + g·noise` with `g` chosen so the mixture sits exactly at the target SNR.
pub fn scale_noise_to_snr(clean: &Signal, noise: &Signal, target_snr_db: f64) -> Result<Signal> {
    let g = snr_gain(clean, noise, target_snr_db)?;
    let samples = clean
        .samples()
        .iter()
        .zip(noise.samples())
        .map(|(c, n)| c + g * n)
        .collect();
    clean.with_samples(samples)
}

pub fn random_noise(len: usize, fs: u32, seed: u64) -> Result<Signal> {
    let mut rng = SplitMix64::new(derive_seed(seed, tag::NOISE));
    Signal::new((0..len).map(|_| rng.normal()).collect(), fs)
}

/// One to three sinusoids between 0.05 and 0.5 Hz with random phases and
/// weights, normalised to unit RMS.
pub fn drift_noise(len: usize, fs: u32, seed: u64) -> Result<Signal> {
    if len == 0 {
        return Err(Error::Empty("noise length"));
    }
    let mut rng = SplitMix64::new(derive_seed(seed, tag::NOISE).rotate_left(7));
    let count = 1 + rng.below(3);
    let tones: Vec<(f64, f64, f64)> = (0..count)
        .map(|_| {
            let freq = rng.uniform(0.05, 0.5);
            let phase = rng.uniform(0.0, 2.0 * PI);
            let weight = rng.uniform(0.5, 1.0);
            (freq, phase, weight)
        })
        .collect();
    let dt = 1.0 / fs as f64;
    let mut samples: Vec<f64> = (0..len)
        .map(|i| {
            let t = i as f64 * dt;
            tones
                .iter()
                .map(|&(f, p, w)| w * (2.0 * PI * f * t + p).sin())
                .sum()
        })
        .collect();
    let rms = (samples.iter().map(|x| x * x).sum::<f64>() / len as f64).sqrt();
    if rms > 0.0 {
        samples.iter_mut().for_each(|x| *x /= rms);
    }
    Signal::new(samples, fs)
}

/// `len` samples of `source` starting at `offset`, wrapping around as needed.
pub fn tile_from(source: &Signal, offset: usize, len: usize) -> Result<Signal> {
    let src = source.samples();
    Signal::new(
        (0..len).map(|i| src[(offset + i) % src.len()]).collect(),
        source.fs(),
    )
}

/// One calibrated noisy copy of `clean` per SNR level, all using the same
/// seed-selected segment of `noise_record`.
pub fn noise_stress_mix(
    clean: &Signal,
    noise_record: &Signal,
    snr_levels_db: &[f64],
    seed: u64,
) -> Result<Vec<(f64, Signal)>> {
    if snr_levels_db.iter().any(|s| !s.is_finite()) {
        return Err(Error::NonFinite("target SNR"));
    }
    if snr_levels_db.is_empty() {
        return Ok(Vec::new());
    }
    let segment = NoiseKind::Recorded(noise_record.clone()).realise(clean.len(), clean.fs(), seed)?;
    snr_levels_db
        .iter()
        .map(|&snr| Ok((snr, scale_noise_to_snr(clean, &segment, snr)?)))
        .collect()
}
