//! Uniformly sampled waveforms and window utilities.

use alloc::vec::Vec;

// Unused when std is linked, whose inherent float methods take precedence.
#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result};

/// A uniformly sampled real waveform, amplitudes in millivolts.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    samples: Vec<f64>,
    fs: u32,
}

/// A span of samples inside a parent signal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Window {
    pub start: usize,
    pub length: usize,
}

impl Signal {
    pub fn new(samples: Vec<f64>, fs: u32) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::Empty("signal samples"));
        }
        if fs == 0 {
            return Err(Error::invalid("sampling rate must be positive"));
        }
        Ok(Self { samples, fs })
    }

    pub fn zeros(len: usize, fs: u32) -> Result<Self> {
        Self::new(alloc::vec![0.0; len], fs)
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    pub fn fs(&self) -> u32 {
        self.fs
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    /// Always false; kept for API symmetry with `len`.
    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration_seconds(&self) -> f64 {
        self.samples.len() as f64 / self.fs as f64
    }

    /// Same sampling rate, new samples.
    pub fn with_samples(&self, samples: Vec<f64>) -> Result<Self> {
        Self::new(samples, self.fs)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            samples: self.samples.iter().map(|&x| f(x)).collect(),
            fs: self.fs,
        }
    }

    pub fn scaled(&self, gain: f64) -> Self {
        self.map(|x| gain * x)
    }

    pub fn add(&self, other: &Signal) -> Result<Self> {
        self.check_compatible(other)?;
        let samples = self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self {
            samples,
            fs: self.fs,
        })
    }

    pub fn sub(&self, other: &Signal) -> Result<Self> {
        self.check_compatible(other)?;
        let samples = self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Self {
            samples,
            fs: self.fs,
        })
    }

    pub(crate) fn check_compatible(&self, other: &Signal) -> Result<()> {
        if self.fs != other.fs {
            return Err(Error::RateMismatch(self.fs, other.fs));
        }
        if self.len() != other.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                actual: other.len(),
            });
        }
        Ok(())
    }

    pub fn window(&self, w: Window) -> Result<Signal> {
        let end = w
            .start
            .checked_add(w.length)
            .filter(|&end| end <= self.len() && w.length > 0)
            .ok_or_else(|| Error::invalid("window exceeds the parent signal"))?;
        Signal::new(self.samples[w.start..end].to_vec(), self.fs)
    }

    /// Number of samples in a window of `window_seconds`, which must be a
    /// whole positive number of samples.
    pub fn window_samples(&self, window_seconds: f64) -> Result<usize> {
        window_len(window_seconds, self.fs)
    }

    /// Consecutive non-overlapping windows; the trailing remainder is dropped.
    pub fn segment(&self, window_seconds: f64) -> Result<Vec<Signal>> {
        let n = self.window_samples(window_seconds)?;
        Ok(self
            .samples
            .chunks_exact(n)
            .map(|c| Signal {
                samples: c.to_vec(),
                fs: self.fs,
            })
            .collect())
    }

    /// Sum of squared samples (not the mean).
    pub fn power(&self) -> f64 {
        self.samples.iter().map(|x| x * x).sum()
    }

    pub fn min_max(&self) -> (f64, f64) {
        self.samples
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
                (lo.min(x), hi.max(x))
            })
    }

    pub fn peak_to_peak(&self) -> f64 {
        let (lo, hi) = self.min_max();
        hi - lo
    }

    /// Affine map of `[min, max]` onto `[lo, hi]`, plus the record that undoes it.
    pub fn minmax_scale(&self, lo: f64, hi: f64) -> Result<(Signal, MinMaxScale)> {
        let scale = MinMaxScale::fit(self, lo, hi)?;
        Ok((scale.apply(self), scale))
    }
}

pub(crate) fn window_len(window_seconds: f64, fs: u32) -> Result<usize> {
    let exact = window_seconds * fs as f64;
    let n = exact.round();
    if !(window_seconds > 0.0) || n < 1.0 || (exact - n).abs() > 1e-9 * n.max(1.0) {
        return Err(Error::invalid(alloc::format!(
            "a {window_seconds} s window at {fs} Hz is not a whole number of samples"
        )));
    }
    Ok(n as usize)
}

/// Joins signals end to end. All parts must share a sampling rate.
pub fn concatenate(parts: &[Signal]) -> Result<Signal> {
    let first = parts.first().ok_or(Error::Empty("signal list"))?;
    let mut samples = Vec::with_capacity(parts.iter().map(Signal::len).sum());
    for p in parts {
        if p.fs != first.fs {
            return Err(Error::RateMismatch(first.fs, p.fs));
        }
        samples.extend_from_slice(&p.samples);
    }
    Signal::new(samples, first.fs)
}

/// Record of a min-max rescaling, sufficient to invert it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinMaxScale {
    pub src_min: f64,
    pub src_max: f64,
    pub lo: f64,
    pub hi: f64,
}

impl MinMaxScale {
    pub fn fit(signal: &Signal, lo: f64, hi: f64) -> Result<Self> {
        if !(lo < hi) {
            return Err(Error::invalid("scale target needs lo < hi"));
        }
        let (src_min, src_max) = signal.min_max();
        if !(src_max > src_min) {
            return Err(Error::ZeroRange);
        }
        Ok(Self {
            src_min,
            src_max,
            lo,
            hi,
        })
    }

    pub fn forward(&self, x: f64) -> f64 {
        self.lo + (x - self.src_min) * (self.hi - self.lo) / (self.src_max - self.src_min)
    }

    pub fn inverse(&self, y: f64) -> f64 {
        self.src_min + (y - self.lo) * (self.src_max - self.src_min) / (self.hi - self.lo)
    }

    pub fn apply(&self, signal: &Signal) -> Signal {
        signal.map(|x| self.forward(x))
    }

    pub fn invert(&self, signal: &Signal) -> Signal {
        signal.map(|y| self.inverse(y))
    }
}

/// Indices of R-peaks: local maxima above `threshold_frac` of the way from
/// the median to the maximum, at least `refractory_s` apart.
pub fn detect_r_peaks(signal: &Signal, threshold_frac: f64, refractory_s: f64) -> Vec<usize> {
    let x = signal.samples();
    let mut sorted = x.to_vec();
    sorted.sort_by(f64::total_cmp);
    let median = sorted[sorted.len() / 2];
    let max = sorted[sorted.len() - 1];
    let threshold = median + threshold_frac * (max - median);
    let refractory = (refractory_s * signal.fs() as f64) as usize;

    let mut peaks: Vec<usize> = Vec::new();
    for i in 0..x.len() {
        let left = if i > 0 { x[i - 1] } else { f64::NEG_INFINITY };
        let right = if i + 1 < x.len() { x[i + 1] } else { f64::NEG_INFINITY };
        if x[i] < threshold || x[i] < left || x[i] <= right {
            continue;
        }
        match peaks.last_mut() {
            Some(last) if i - *last < refractory => {
                if x[i] > x[*last] {
                    *last = i;
                }
            }
            _ => peaks.push(i),
        }
    }
    peaks
}
