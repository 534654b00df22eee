//! First-order Butterworth designs, zero-phase filtering and the
//! four-stage ECG pre-filtering chain (low-pass, high-pass, mains notch,
//! wavelet baseline removal).

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

// Unused when std is linked, whose inherent float methods take precedence.
#[allow(unused_imports)]
use num_traits::Float;

use crate::wavelet::{dwt, idwt, Family, WaveletSpec};
use crate::{Error, Result, Signal};

pub const LOWPASS_HZ: f64 = 30.0;
pub const HIGHPASS_HZ: f64 = 0.1;
pub const NOTCH_LOW_HZ: f64 = 47.5;
pub const NOTCH_HIGH_HZ: f64 = 52.5;
/// Baseline-removal depth targets approximation bands below this frequency.
pub const BASELINE_TARGET_HZ: f64 = 0.67;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FilterKind {
    Lowpass,
    Highpass,
    Bandstop,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FilterDesign {
    pub kind: FilterKind,
    pub cutoffs_hz: Vec<f64>,
    pub order: usize,
    pub fs: u32,
}

/// Direct-form IIR filter with `a[0] == 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct IirFilter {
    pub b: Vec<f64>,
    pub a: Vec<f64>,
    pub design: FilterDesign,
}

/// Bilinear transform with pre-warping of a first-order Butterworth
/// prototype. Band-stop uses the low-pass to band-stop transform of the
/// prototype, which yields a second-order digital section.
pub fn design_butterworth(
    kind: FilterKind,
    cutoffs_hz: &[f64],
    order: usize,
    fs: u32,
) -> Result<IirFilter> {
    if order != 1 {
        return Err(Error::invalid("only first-order prototypes are supported"));
    }
    let nyquist = fs as f64 / 2.0;
    let expected = match kind {
        FilterKind::Lowpass | FilterKind::Highpass => 1,
        FilterKind::Bandstop => 2,
    };
    if cutoffs_hz.len() != expected {
        return Err(Error::invalid(alloc::format!(
            "{kind:?} needs {expected} cutoff frequencies"
        )));
    }
    for &fc in cutoffs_hz {
        if !(fc > 0.0 && fc < nyquist) {
            return Err(Error::invalid(alloc::format!(
                "cutoff {fc} Hz must lie strictly inside (0, {nyquist}) Hz"
            )));
        }
    }
    let warp = |fc: f64| (PI * fc / fs as f64).tan();
    let (b, a) = match kind {
        FilterKind::Lowpass => {
            let k = warp(cutoffs_hz[0]);
            let n = 1.0 + k;
            (vec![k / n, k / n], vec![1.0, (k - 1.0) / n])
        }
        FilterKind::Highpass => {
            let k = warp(cutoffs_hz[0]);
            let n = 1.0 + k;
            (vec![1.0 / n, -1.0 / n], vec![1.0, (k - 1.0) / n])
        }
        FilterKind::Bandstop => {
            if !(cutoffs_hz[0] < cutoffs_hz[1]) {
                return Err(Error::invalid("band-stop needs lower < upper"));
            }
            let (w1, w2) = (warp(cutoffs_hz[0]), warp(cutoffs_hz[1]));
            let w0sq = w1 * w2;
            let bw = w2 - w1;
            let d0 = 1.0 + bw + w0sq;
            (
                vec![(1.0 + w0sq) / d0, 2.0 * (w0sq - 1.0) / d0, (1.0 + w0sq) / d0],
                vec![1.0, 2.0 * (w0sq - 1.0) / d0, (1.0 - bw + w0sq) / d0],
            )
        }
    };
    Ok(IirFilter {
        b,
        a,
        design: FilterDesign {
            kind,
            cutoffs_hz: cutoffs_hz.to_vec(),
            order,
            fs,
        },
    })
}

impl IirFilter {
    /// Complex response `(re, im)` at `freq_hz`.
    pub fn response(&self, freq_hz: f64) -> (f64, f64) {
        let w = 2.0 * PI * freq_hz / self.design.fs as f64;
        let eval = |c: &[f64]| {
            c.iter().enumerate().fold((0.0, 0.0), |(re, im), (k, &v)| {
                (re + v * (w * k as f64).cos(), im - v * (w * k as f64).sin())
            })
        };
        let (nr, ni) = eval(&self.b);
        let (dr, di) = eval(&self.a);
        let den = dr * dr + di * di;
        ((nr * dr + ni * di) / den, (ni * dr - nr * di) / den)
    }

    pub fn magnitude(&self, freq_hz: f64) -> f64 {
        let (re, im) = self.response(freq_hz);
        re.hypot(im)
    }

    /// Largest pole magnitude (first- and second-order sections only).
    pub fn max_pole_magnitude(&self) -> f64 {
        match self.a.len() {
            1 => 0.0,
            2 => self.a[1].abs(),
            3 => {
                let (p, q) = (self.a[1], self.a[2]);
                let disc = p * p - 4.0 * q;
                if disc < 0.0 {
                    q.sqrt()
                } else {
                    let s = disc.sqrt();
                    ((-p + s) / 2.0).abs().max(((-p - s) / 2.0).abs())
                }
            }
            _ => f64::NAN,
        }
    }

    pub fn is_stable(&self) -> bool {
        self.max_pole_magnitude() < 1.0 - 1e-9
    }

    fn order(&self) -> usize {
        self.a.len().max(self.b.len()) - 1
    }

    /// Transposed direct-form II filtering from initial state `zi`.
    pub fn lfilter(&self, x: &[f64], zi: &[f64]) -> Vec<f64> {
        let n = self.order();
        let coef = |c: &[f64], i: usize| c.get(i).copied().unwrap_or(0.0);
        let mut z = zi.to_vec();
        z.resize(n, 0.0);
        let mut y = Vec::with_capacity(x.len());
        for &xi in x {
            let yi = coef(&self.b, 0) * xi + z.first().copied().unwrap_or(0.0);
            for k in 0..n {
                let next = if k + 1 < n { z[k + 1] } else { 0.0 };
                z[k] = coef(&self.b, k + 1) * xi - coef(&self.a, k + 1) * yi + next;
            }
            y.push(yi);
        }
        y
    }

    /// Steady-state initial conditions for a unit step input.
    pub fn lfilter_zi(&self) -> Vec<f64> {
        let n = self.order();
        let coef = |c: &[f64], i: usize| c.get(i).copied().unwrap_or(0.0);
        let b0 = coef(&self.b, 0);
        // (I - A^T) zi = b[1:] - a[1:] b0 with A the companion matrix.
        let mut m = vec![vec![0.0; n]; n];
        let mut rhs = vec![0.0; n];
        for i in 0..n {
            m[i][i] = 1.0;
            m[i][0] += coef(&self.a, i + 1);
            if i + 1 < n {
                m[i][i + 1] -= 1.0;
            }
            rhs[i] = coef(&self.b, i + 1) - coef(&self.a, i + 1) * b0;
        }
        solve_small(m, rhs)
    }
}

fn solve_small(mut m: Vec<Vec<f64>>, mut rhs: Vec<f64>) -> Vec<f64> {
    let n = rhs.len();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))
            .unwrap_or(col);
        m.swap(col, pivot);
        rhs.swap(col, pivot);
        for row in col + 1..n {
            let f = m[row][col] / m[col][col];
            let (above, below) = m.split_at_mut(row);
            for (target, source) in below[0][col..].iter_mut().zip(&above[col][col..]) {
                *target -= f * source;
            }
            rhs[row] -= f * rhs[col];
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|k| m[i][k] * x[k]).sum();
        x[i] = (rhs[i] - s) / m[i][i];
    }
    x
}

/// Edge padding used by [`filtfilt`]: `3 × (max(len(a), len(b)) − 1)`.
pub fn filtfilt_padlen(filter: &IirFilter) -> usize {
    3 * (filter.a.len().max(filter.b.len()) - 1)
}

/// Forward-backward filtering with odd reflection padding and steady-state
/// initial conditions. Zero phase; magnitude response `|H|²`.
pub fn filtfilt(filter: &IirFilter, signal: &Signal) -> Result<Signal> {
    let x = signal.samples();
    let pad = filtfilt_padlen(filter);
    if x.len() <= pad {
        return Err(Error::TooShort {
            needed: pad,
            actual: x.len(),
        });
    }
    let n = x.len();
    let mut ext = Vec::with_capacity(n + 2 * pad);
    ext.extend((1..=pad).rev().map(|i| 2.0 * x[0] - x[i]));
    ext.extend_from_slice(x);
    ext.extend((1..=pad).map(|i| 2.0 * x[n - 1] - x[n - 1 - i]));

    let zi = filter.lfilter_zi();
    let scaled = |s: f64| zi.iter().map(|z| z * s).collect::<Vec<_>>();
    let mut y = filter.lfilter(&ext, &scaled(ext[0]));
    y.reverse();
    let mut y = filter.lfilter(&y, &scaled(y[0]));
    y.reverse();
    signal.with_samples(y[pad..pad + n].to_vec())
}

/// Decomposition depth that isolates the band below ~0.67 Hz: `⌊log2(fs / 0.67)⌋`.
pub fn baseline_levels(fs: u32) -> usize {
    (fs as f64 / BASELINE_TARGET_HZ).log2().floor() as usize
}

/// Zeroes the deepest sym4 approximation band and reconstructs.
pub fn remove_baseline_wavelet(signal: &Signal) -> Result<Signal> {
    let spec = WaveletSpec::new(Family::Sym4);
    let mut coeffs = dwt(signal, &spec, baseline_levels(signal.fs()))?;
    coeffs.approximation.iter_mut().for_each(|c| *c = 0.0);
    idwt(&coeffs, &spec)
}

/// The stages of the pre-filtering chain, in application order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Lowpass,
    Highpass,
    Notch,
    Baseline,
}

impl Stage {
    pub const CHAIN: [Stage; 4] = [Stage::Lowpass, Stage::Highpass, Stage::Notch, Stage::Baseline];

    pub fn name(self) -> &'static str {
        match self {
            Stage::Lowpass => "lowpass",
            Stage::Highpass => "highpass",
            Stage::Notch => "notch",
            Stage::Baseline => "baseline",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::CHAIN.into_iter().find(|s| s.name() == name)
    }

    /// The IIR design behind a stage; `None` for the wavelet stage.
    pub fn design(self, fs: u32) -> Option<Result<IirFilter>> {
        let (kind, cutoffs): (FilterKind, &[f64]) = match self {
            Stage::Lowpass => (FilterKind::Lowpass, &[LOWPASS_HZ]),
            Stage::Highpass => (FilterKind::Highpass, &[HIGHPASS_HZ]),
            Stage::Notch => (FilterKind::Bandstop, &[NOTCH_LOW_HZ, NOTCH_HIGH_HZ]),
            Stage::Baseline => return None,
        };
        Some(design_butterworth(kind, cutoffs, 1, fs))
    }

    pub fn apply(self, signal: &Signal) -> Result<Signal> {
        match self.design(signal.fs()) {
            Some(filter) => filtfilt(&filter?, signal),
            None => remove_baseline_wavelet(signal),
        }
    }
}

/// Low-pass 30 Hz, high-pass 0.1 Hz, 47.5–52.5 Hz notch, then wavelet
/// baseline removal.
pub fn algorithm1(signal: &Signal) -> Result<Signal> {
    if signal.fs() <= 120 {
        return Err(Error::invalid("the chain needs fs > 120 Hz"));
    }
    Stage::CHAIN
        .iter()
        .try_fold(signal.clone(), |s, stage| stage.apply(&s))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sine(freq: f64, fs: u32, secs: f64, amp: f64) -> Signal {
        let n = (fs as f64 * secs) as usize;
        Signal::new(
            (0..n)
                .map(|i| amp * (2.0 * PI * freq * i as f64 / fs as f64).sin())
                .collect(),
            fs,
        )
        .unwrap()
    }

    #[test]
    fn highpass_blocks_dc() {
        let f = design_butterworth(FilterKind::Highpass, &[0.1], 1, 360).unwrap();
        assert_eq!(f.b.iter().sum::<f64>(), 0.0);
        assert_eq!(f.magnitude(0.0), 0.0);
    }

    #[test]
    fn lowpass_gain_points() {
        let f = design_butterworth(FilterKind::Lowpass, &[30.0], 1, 360).unwrap();
        assert!((f.magnitude(0.0) - 1.0).abs() < 1e-15);
        assert!((f.magnitude(30.0) - 0.5f64.sqrt()).abs() < 1e-6);
    }

    #[test]
    fn notch_matches_reference_design() {
        // Coefficients of the same first-order band-stop from a mainstream
        // DSP library, rounded to 8 digits.
        let f = design_butterworth(FilterKind::Bandstop, &[47.5, 52.5], 1, 360).unwrap();
        let b = [0.95816559, -1.23296745, 0.95816559];
        let a = [1.0, -1.23296745, 0.91633117];
        for (x, y) in f.b.iter().zip(b).chain(f.a.iter().zip(a)) {
            assert!((x - y).abs() < 1e-8);
        }
        assert!(f.magnitude(50.0) < 0.05);
    }

    #[test]
    fn designs_are_stable() {
        for fs in [250, 360, 500, 1000, 3000] {
            for stage in [Stage::Lowpass, Stage::Highpass, Stage::Notch] {
                let f = stage.design(fs).unwrap().unwrap();
                assert!(f.is_stable(), "{stage:?} at {fs}");
                assert_eq!(f.a[0], 1.0);
            }
        }
    }

    #[test]
    fn rejects_cutoffs_past_nyquist() {
        assert!(design_butterworth(FilterKind::Lowpass, &[180.0], 1, 360).is_err());
        assert!(design_butterworth(FilterKind::Bandstop, &[52.5, 47.5], 1, 360).is_err());
        assert!(design_butterworth(FilterKind::Lowpass, &[30.0], 2, 360).is_err());
        assert!(algorithm1(&Signal::zeros(1000, 100).unwrap()).is_err());
    }

    #[test]
    fn filtfilt_keeps_symmetry() {
        let f = design_butterworth(FilterKind::Lowpass, &[30.0], 1, 360).unwrap();
        let n = 201;
        let x = Signal::new(
            (0..n)
                .map(|i| (-((i as f64 - 100.0) / 6.0).powi(2)).exp())
                .collect(),
            360,
        )
        .unwrap();
        let y = filtfilt(&f, &x).unwrap();
        let s = y.samples();
        let asym = (0..n).map(|i| (s[i] - s[n - 1 - i]).abs()).fold(0.0, f64::max);
        assert!(asym < 1e-10, "{asym}");
    }

    #[test]
    fn notch_kills_fifty_hertz_in_steady_state() {
        let f = Stage::Notch.design(360).unwrap().unwrap();
        let x = sine(50.0, 360, 10.0, 1.0);
        let y = filtfilt(&f, &x).unwrap();
        // Away from the edge transients the residual is |H(50)|² of the input.
        let inner = |s: &Signal| {
            let v = &s.samples()[360..s.len() - 360];
            (v.iter().map(|x| x * x).sum::<f64>() / v.len() as f64).sqrt()
        };
        let ratio = inner(&y) / inner(&x);
        assert!(ratio < 0.0025, "{ratio}");
        assert!(ratio <= f.magnitude(50.0).powi(2) * 1.05);
        assert!(-20.0 * ratio.log10() >= 26.0);
    }

    #[test]
    fn highpass_removes_dc_offset() {
        let f = Stage::Highpass.design(360).unwrap().unwrap();
        let x = Signal::new(vec![1.0; 3600], 360).unwrap();
        let y = filtfilt(&f, &x).unwrap();
        let mean = y.samples().iter().sum::<f64>() / 3600.0;
        assert!(mean.abs() < 1e-6);
    }

    #[test]
    fn filtfilt_rejects_short_input() {
        let f = Stage::Notch.design(360).unwrap().unwrap();
        assert!(matches!(
            filtfilt(&f, &Signal::zeros(6, 360).unwrap()),
            Err(Error::TooShort { .. })
        ));
    }

    #[test]
    fn baseline_depth_rule() {
        assert_eq!(baseline_levels(360), 9);
        assert!(remove_baseline_wavelet(&Signal::zeros(360, 360).unwrap()).is_err());
    }

    #[test]
    fn baseline_removal_kills_slow_sine() {
        let x = sine(0.2, 360, 10.0, 1.0);
        let y = remove_baseline_wavelet(&x).unwrap();
        assert!(y.power() < 0.05 * x.power(), "{}", y.power() / x.power());
    }

    #[test]
    fn zero_in_zero_out() {
        let z = Signal::zeros(3600, 360).unwrap();
        assert!(remove_baseline_wavelet(&z).unwrap().samples().iter().all(|&v| v == 0.0));
        assert!(algorithm1(&z).unwrap().samples().iter().all(|&v| v == 0.0));
    }
}
