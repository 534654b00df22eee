//! Multilevel discrete wavelet transform and universal-threshold shrinkage.
//!
//! Analysis keeps the odd outputs of the full convolution with the
//! decomposition filters. Two boundary modes are supported: half-sample
//! symmetric extension (output length `⌊(n + F − 1)/2⌋`, the usual
//! default) and periodisation (output length `n/2`, orthogonal, so energy is
//! preserved exactly and synthesis is the transpose of analysis).

use alloc::vec;
use alloc::vec::Vec;

// Unused when std is linked, whose inherent float methods take precedence.
#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result, Signal};

const HAAR: [f64; 2] = [core::f64::consts::FRAC_1_SQRT_2, core::f64::consts::FRAC_1_SQRT_2];

// Daubechies, 4 vanishing moments (extremal phase).
const DB4: [f64; 8] = [
    -0.010_597_401_785_069_032,
    0.032_883_011_666_885_2,
    0.030_841_381_835_560_764,
    -0.187_034_811_719_093_08,
    -0.027_983_769_416_859_854,
    0.630_880_767_929_858_9,
    0.714_846_570_552_915_6,
    0.230_377_813_308_896_5,
];

// Symlet, 4 vanishing moments (least asymmetric).
const SYM4: [f64; 8] = [
    -0.075_765_714_789_502_21,
    -0.029_635_527_646_002_49,
    0.497_618_667_632_775,
    0.803_738_751_805_132_1,
    0.297_857_795_605_306_05,
    -0.099_219_543_576_633_53,
    -0.012_603_967_262_031_304,
    0.032_223_100_604_051_47,
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Haar,
    Db4,
    Sym4,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Haar => "haar",
            Family::Db4 => "db4",
            Family::Sym4 => "sym4",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "haar" => Some(Family::Haar),
            "db4" => Some(Family::Db4),
            "sym4" => Some(Family::Sym4),
            _ => None,
        }
    }

    pub fn vanishing_moments(self) -> usize {
        match self {
            Family::Haar => 1,
            Family::Db4 | Family::Sym4 => 4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    Symmetric,
    Periodic,
}

/// Orthogonal wavelet filter bank.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveletSpec {
    pub family: Family,
    pub dec_lo: Vec<f64>,
    pub dec_hi: Vec<f64>,
    pub rec_lo: Vec<f64>,
    pub rec_hi: Vec<f64>,
}

impl WaveletSpec {
    pub fn new(family: Family) -> Self {
        let dec_lo: Vec<f64> = match family {
            Family::Haar => HAAR.to_vec(),
            Family::Db4 => DB4.to_vec(),
            Family::Sym4 => SYM4.to_vec(),
        };
        let f = dec_lo.len();
        // Quadrature mirror: g[j] = (-1)^(j+1) h[F-1-j].
        let dec_hi: Vec<f64> = (0..f)
            .map(|j| {
                let sign = if j % 2 == 0 { -1.0 } else { 1.0 };
                sign * dec_lo[f - 1 - j]
            })
            .collect();
        let rec_lo = dec_lo.iter().rev().copied().collect();
        let rec_hi = dec_hi.iter().rev().copied().collect();
        Self {
            family,
            dec_lo,
            dec_hi,
            rec_lo,
            rec_hi,
        }
    }

    pub fn filter_len(&self) -> usize {
        self.dec_lo.len()
    }

    /// Deepest level whose coarsest band still spans a full filter.
    pub fn max_level(&self, n: usize) -> usize {
        let span = self.filter_len() - 1;
        if n < span.max(1) {
            return 0;
        }
        let mut level = 0;
        while (n >> (level + 1)) >= span.max(1) && (1usize << (level + 1)) <= n {
            level += 1;
        }
        level
    }

    /// `min(4, max_level)`, at least 1.
    pub fn default_levels(&self, n: usize) -> usize {
        self.max_level(n).clamp(1, 4)
    }
}

/// Coefficients of an L-level decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct DwtCoeffs {
    pub family: Family,
    pub boundary: Boundary,
    pub fs: u32,
    /// Approximation at the deepest level.
    pub approximation: Vec<f64>,
    /// Detail bands, coarsest first and finest last.
    pub details: Vec<Vec<f64>>,
    pub original_length: usize,
    /// Length of the input to each analysis level, finest first.
    pub level_lengths: Vec<usize>,
}

impl DwtCoeffs {
    pub fn levels(&self) -> usize {
        self.details.len()
    }

    pub fn finest_detail(&self) -> &[f64] {
        self.details.last().map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn energy(&self) -> f64 {
        let sq = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>();
        sq(&self.approximation) + self.details.iter().map(|d| sq(d)).sum::<f64>()
    }
}

/// Half-sample symmetric index into `0..n` for any integer position.
fn symmetric_index(i: isize, n: usize) -> usize {
    let period = 2 * n as isize;
    let r = i.rem_euclid(period);
    if r < n as isize {
        r as usize
    } else {
        (period - 1 - r) as usize
    }
}

fn analyse(x: &[f64], spec: &WaveletSpec, boundary: Boundary) -> (Vec<f64>, Vec<f64>) {
    let n = x.len();
    let f = spec.filter_len();
    let out_len = match boundary {
        Boundary::Symmetric => (n + f - 1) / 2,
        Boundary::Periodic => n / 2,
    };
    let mut lo = vec![0.0; out_len];
    let mut hi = vec![0.0; out_len];
    for k in 0..out_len {
        let (mut a, mut d) = (0.0, 0.0);
        for j in 0..f {
            let pos = 2 * k as isize + 1 - j as isize;
            let idx = match boundary {
                Boundary::Symmetric => symmetric_index(pos, n),
                Boundary::Periodic => pos.rem_euclid(n as isize) as usize,
            };
            a += spec.dec_lo[j] * x[idx];
            d += spec.dec_hi[j] * x[idx];
        }
        lo[k] = a;
        hi[k] = d;
    }
    (lo, hi)
}

fn synthesise(
    lo: &[f64],
    hi: &[f64],
    spec: &WaveletSpec,
    boundary: Boundary,
    out_len: usize,
) -> Vec<f64> {
    let f = spec.filter_len();
    let mut x = vec![0.0; out_len];
    match boundary {
        Boundary::Periodic => {
            // Transpose of the orthogonal analysis operator.
            for k in 0..lo.len() {
                for j in 0..f {
                    let pos = (2 * k as isize + 1 - j as isize).rem_euclid(out_len as isize);
                    x[pos as usize] += spec.dec_lo[j] * lo[k] + spec.dec_hi[j] * hi[k];
                }
            }
        }
        Boundary::Symmetric => {
            // Full convolution of the upsampled bands with the synthesis
            // filters, keeping the centre starting at F - 2.
            for (i, xi) in x.iter_mut().enumerate() {
                let m = i + f - 2;
                let k_lo = m.saturating_sub(f - 1).div_ceil(2);
                let k_hi = (m / 2).min(lo.len().saturating_sub(1));
                let mut acc = 0.0;
                for k in k_lo..=k_hi {
                    let tap = m - 2 * k;
                    acc += spec.rec_lo[tap] * lo[k] + spec.rec_hi[tap] * hi[k];
                }
                *xi = acc;
            }
        }
    }
    x
}

/// L-level decomposition with symmetric boundary handling.
pub fn dwt(signal: &Signal, spec: &WaveletSpec, levels: usize) -> Result<DwtCoeffs> {
    dwt_with(signal, spec, levels, Boundary::Symmetric)
}

pub fn dwt_with(
    signal: &Signal,
    spec: &WaveletSpec,
    levels: usize,
    boundary: Boundary,
) -> Result<DwtCoeffs> {
    let n = signal.len();
    if levels == 0 {
        return Err(Error::invalid("decomposition needs at least one level"));
    }
    if n < spec.filter_len() {
        return Err(Error::TooShort {
            needed: spec.filter_len() - 1,
            actual: n,
        });
    }
    if levels >= usize::BITS as usize || (1usize << levels) > n {
        return Err(Error::TooDeep { levels, len: n });
    }
    if boundary == Boundary::Periodic && !n.is_multiple_of(1usize << levels) {
        return Err(Error::invalid(alloc::format!(
            "periodic decomposition to depth {levels} needs a length divisible by {}",
            1usize << levels
        )));
    }

    let mut approx = signal.samples().to_vec();
    let mut details = Vec::with_capacity(levels);
    let mut level_lengths = Vec::with_capacity(levels);
    for _ in 0..levels {
        level_lengths.push(approx.len());
        let (lo, hi) = analyse(&approx, spec, boundary);
        details.push(hi);
        approx = lo;
    }
    details.reverse();
    Ok(DwtCoeffs {
        family: spec.family,
        boundary,
        fs: signal.fs(),
        approximation: approx,
        details,
        original_length: n,
        level_lengths,
    })
}

/// Exact-length reconstruction.
pub fn idwt(coeffs: &DwtCoeffs, spec: &WaveletSpec) -> Result<Signal> {
    if coeffs.family != spec.family {
        return Err(Error::invalid(alloc::format!(
            "coefficients come from {} but the filter bank is {}",
            coeffs.family.name(),
            spec.family.name()
        )));
    }
    if coeffs.level_lengths.len() != coeffs.details.len() || coeffs.details.is_empty() {
        return Err(Error::Shape("level bookkeeping does not match detail bands".into()));
    }
    let mut approx = coeffs.approximation.clone();
    for (detail, &out_len) in coeffs
        .details
        .iter()
        .zip(coeffs.level_lengths.iter().rev())
    {
        if detail.len() != approx.len() {
            return Err(Error::Shape(alloc::format!(
                "approximation has {} coefficients but detail band has {}",
                approx.len(),
                detail.len()
            )));
        }
        approx = synthesise(&approx, detail, spec, coeffs.boundary, out_len);
    }
    Signal::new(approx, coeffs.fs)
}

pub fn soft_threshold(x: f64, lambda: f64) -> f64 {
    let mag = x.abs() - lambda;
    if mag > 0.0 {
        mag.copysign(x)
    } else {
        0.0
    }
}

pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n == 0 {
        0.0
    } else if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Noise level from the finest detail band: `median(|d|) / 0.6745`.
pub fn noise_sigma(coeffs: &DwtCoeffs) -> f64 {
    let abs: Vec<f64> = coeffs.finest_detail().iter().map(|d| d.abs()).collect();
    median(&abs) / 0.6745
}

/// `σ √(2 ln N)`.
pub fn universal_threshold(sigma: f64, n: usize) -> f64 {
    sigma * (2.0 * (n as f64).ln()).sqrt()
}

/// Soft-thresholds every detail band with one level-independent threshold.
pub fn shrink_details(coeffs: &mut DwtCoeffs, lambda: f64) {
    for band in coeffs.details.iter_mut() {
        band.iter_mut().for_each(|d| *d = soft_threshold(*d, lambda));
    }
}

/// Universal-threshold soft shrinkage.
pub fn wavelet_denoise(signal: &Signal, spec: &WaveletSpec, levels: usize) -> Result<Signal> {
    let mut coeffs = dwt(signal, spec, levels)?;
    let lambda = universal_threshold(noise_sigma(&coeffs), signal.len());
    shrink_details(&mut coeffs, lambda);
    idwt(&coeffs, spec)
}
