//! Restricted Boltzmann machine with mean-field real-valued visibles,
//! CD-1 training and one-pass reconstruction denoising.

use alloc::vec;
use alloc::vec::Vec;

// Unused when std is linked, whose inherent float methods take precedence.
#[allow(unused_imports)]
use num_traits::Float;

use crate::rng::{derive_seed, tag, SplitMix64};
use crate::signal::MinMaxScale;
use crate::{Denoiser, Error, Result, Signal};

/// Largest `n_visible + n_hidden` for which the partition function is enumerated.
pub const MAX_EXACT_UNITS: usize = 20;

const SCALE_TOLERANCE: f64 = 1e-9;

/// Weights are stored visible-major: `w[k * n_hidden + m]` couples visible
/// unit `k` with hidden unit `m`.
#[derive(Debug, Clone, PartialEq)]
pub struct RbmParams {
    pub n_visible: usize,
    pub n_hidden: usize,
    pub w: Vec<f64>,
    /// Visible biases.
    pub a: Vec<f64>,
    /// Hidden biases.
    pub b: Vec<f64>,
}

pub fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

fn check_len(v: &[f64], expected: usize) -> Result<()> {
    if v.len() != expected {
        return Err(Error::LengthMismatch {
            expected,
            actual: v.len(),
        });
    }
    Ok(())
}

impl RbmParams {
    pub fn zeros(n_visible: usize, n_hidden: usize) -> Self {
        Self {
            n_visible,
            n_hidden,
            w: vec![0.0; n_visible * n_hidden],
            a: vec![0.0; n_visible],
            b: vec![0.0; n_hidden],
        }
    }

    /// Zero biases and weights drawn from N(0, 0.01²).
    pub fn random(n_visible: usize, n_hidden: usize, seed: u64) -> Self {
        let mut p = Self::zeros(n_visible, n_hidden);
        let mut rng = SplitMix64::new(derive_seed(seed, tag::RBM));
        p.w.iter_mut().for_each(|w| *w = 0.01 * rng.normal());
        p
    }

    pub fn validate(&self) -> Result<()> {
        check_len(&self.w, self.n_visible * self.n_hidden)?;
        check_len(&self.a, self.n_visible)?;
        check_len(&self.b, self.n_hidden)?;
        if self.w.iter().chain(&self.a).chain(&self.b).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("RBM parameters"));
        }
        Ok(())
    }

    /// `E = −Σ a·v − Σ b·h − Σ v w h`.
    pub fn energy(&self, visible: &[f64], hidden: &[f64]) -> Result<f64> {
        check_len(visible, self.n_visible)?;
        check_len(hidden, self.n_hidden)?;
        let mut e = -dot(&self.a, visible) - dot(&self.b, hidden);
        for (k, &v) in visible.iter().enumerate() {
            e -= v * dot(self.row(k), hidden);
        }
        Ok(e)
    }

    fn row(&self, k: usize) -> &[f64] {
        &self.w[k * self.n_hidden..(k + 1) * self.n_hidden]
    }

    /// `σ(b_m + Σ_k v_k w_km)` for every hidden unit.
    pub fn hidden_given_visible(&self, visible: &[f64]) -> Result<Vec<f64>> {
        check_len(visible, self.n_visible)?;
        let mut pre = self.b.clone();
        for (k, &v) in visible.iter().enumerate() {
            if v != 0.0 {
                for (p, w) in pre.iter_mut().zip(self.row(k)) {
                    *p += v * w;
                }
            }
        }
        Ok(pre.into_iter().map(sigmoid).collect())
    }

    /// `σ(a_k + Σ_m h_m w_km)` for every visible unit; used directly as the
    /// real-valued reconstruction.
    pub fn visible_given_hidden(&self, hidden: &[f64]) -> Result<Vec<f64>> {
        check_len(hidden, self.n_hidden)?;
        Ok((0..self.n_visible)
            .map(|k| sigmoid(self.a[k] + dot(self.row(k), hidden)))
            .collect())
    }

    /// The same machine with visible and hidden roles exchanged.
    pub fn transposed(&self) -> Self {
        let mut w = vec![0.0; self.w.len()];
        for k in 0..self.n_visible {
            for m in 0..self.n_hidden {
                w[m * self.n_visible + k] = self.w[k * self.n_hidden + m];
            }
        }
        Self {
            n_visible: self.n_hidden,
            n_hidden: self.n_visible,
            w,
            a: self.b.clone(),
            b: self.a.clone(),
        }
    }

    /// `Σ exp(−E)` over every binary visible/hidden configuration.
    pub fn partition_function(&self) -> Result<f64> {
        let units = self.n_visible + self.n_hidden;
        if units > MAX_EXACT_UNITS {
            return Err(Error::invalid(alloc::format!(
                "exact partition function limited to {MAX_EXACT_UNITS} units, got {units}"
            )));
        }
        let mut total = 0.0;
        for_each_state(self.n_visible, self.n_hidden, |v, h| {
            total += (-self.energy(v, h).expect("state sizes match")).exp();
        });
        Ok(total)
    }

    /// `exp(−E(v, h)) / T` with the partition function enumerated exhaustively.
    pub fn joint_probability(&self, visible: &[f64], hidden: &[f64]) -> Result<f64> {
        let t = self.partition_function()?;
        Ok((-self.energy(visible, hidden)?).exp() / t)
    }

    /// One deterministic up-down pass with mean activations.
    pub fn reconstruct(&self, visible: &[f64]) -> Result<Vec<f64>> {
        let h = self.hidden_given_visible(visible)?;
        self.visible_given_hidden(&h)
    }
}

/// Calls `f` on every binary `(visible, hidden)` pair, in binary counting order.
pub fn for_each_state(n_visible: usize, n_hidden: usize, mut f: impl FnMut(&[f64], &[f64])) {
    let units = n_visible + n_hidden;
    let mut state = vec![0.0; units];
    for code in 0u64..(1u64 << units) {
        for (i, s) in state.iter_mut().enumerate() {
            *s = ((code >> i) & 1) as f64;
        }
        f(&state[..n_visible], &state[n_visible..]);
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[derive(Debug, Clone, PartialEq)]
pub struct RbmConfig {
    pub n_hidden: usize,
    pub learning_rate: f64,
    pub epochs: usize,
    pub batch_size: usize,
    pub seed: u64,
}

impl Default for RbmConfig {
    fn default() -> Self {
        Self {
            n_hidden: 64,
            learning_rate: 0.01,
            epochs: 20,
            batch_size: 10,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RbmTrace {
    /// Mean squared difference between data and its one-step reconstruction, per epoch.
    pub epoch_recon_error: Vec<f64>,
}

/// Contrastive divergence with one Gibbs step. Hidden states are sampled on
/// the way up, visibles stay at their means, and the negative statistics use
/// hidden means. Inputs must already lie in [0, 1].
pub fn train_cd1<W: AsRef<[f64]>>(data: &[W], config: &RbmConfig) -> Result<(RbmParams, RbmTrace)> {
    let first = data.first().ok_or(Error::Empty("training windows"))?;
    let n_visible = first.as_ref().len();
    if config.n_hidden == 0 || config.batch_size == 0 || n_visible == 0 {
        return Err(Error::invalid("hidden units, batch size and window length must be positive"));
    }
    if !config.learning_rate.is_finite() || config.learning_rate < 0.0 {
        return Err(Error::invalid("learning rate must be finite and non-negative"));
    }
    for w in data {
        let w = w.as_ref();
        check_len(w, n_visible)?;
        if w.iter().any(|&x| !(-SCALE_TOLERANCE..=1.0 + SCALE_TOLERANCE).contains(&x)) {
            return Err(Error::invalid("RBM inputs must be scaled to [0, 1]"));
        }
    }

    let mut p = RbmParams::random(n_visible, config.n_hidden, config.seed);
    let mut rng = SplitMix64::new(derive_seed(config.seed, tag::RBM).rotate_left(13));
    let mut order: Vec<usize> = (0..data.len()).collect();
    let mut trace = RbmTrace::default();
    let nh = config.n_hidden;
    for _ in 0..config.epochs {
        rng.shuffle(&mut order);
        let mut err = 0.0;
        for batch in order.chunks(config.batch_size) {
            let mut dw = vec![0.0; p.w.len()];
            let mut da = vec![0.0; n_visible];
            let mut db = vec![0.0; nh];
            for &i in batch {
                let v0 = data[i].as_ref();
                let h0 = p.hidden_given_visible(v0)?;
                let h0s: Vec<f64> = h0.iter().map(|&q| f64::from(u8::from(rng.bernoulli(q)))).collect();
                let v1 = p.visible_given_hidden(&h0s)?;
                let h1 = p.hidden_given_visible(&v1)?;
                for k in 0..n_visible {
                    let row = &mut dw[k * nh..(k + 1) * nh];
                    for m in 0..nh {
                        row[m] += v0[k] * h0[m] - v1[k] * h1[m];
                    }
                    da[k] += v0[k] - v1[k];
                    err += (v0[k] - v1[k]) * (v0[k] - v1[k]);
                }
                for m in 0..nh {
                    db[m] += h0[m] - h1[m];
                }
            }
            let step = config.learning_rate / batch.len() as f64;
            for (w, d) in p.w.iter_mut().zip(&dw) {
                *w += step * d;
            }
            for (a, d) in p.a.iter_mut().zip(&da) {
                *a += step * d;
            }
            for (b, d) in p.b.iter_mut().zip(&db) {
                *b += step * d;
            }
        }
        trace
            .epoch_recon_error
            .push(err / (data.len() * n_visible) as f64);
    }
    p.validate()?;
    Ok((p, trace))
}

/// Min-max scales the window to [0, 1], reconstructs it and maps it back.
/// A constant window is shifted to zero instead of scaled, so its output is
/// the constant plus the reconstruction of the all-zero visible vector.
pub fn denoise_rbm(params: &RbmParams, noisy: &Signal) -> Result<Signal> {
    check_len(noisy.samples(), params.n_visible)?;
    let scale = match MinMaxScale::fit(noisy, 0.0, 1.0) {
        Ok(s) => s,
        Err(Error::ZeroRange) => {
            let c = noisy.samples()[0];
            MinMaxScale {
                src_min: c,
                src_max: c + 1.0,
                lo: 0.0,
                hi: 1.0,
            }
        }
        Err(e) => return Err(e),
    };
    let scaled = scale.apply(noisy);
    let recon = params.reconstruct(scaled.samples())?;
    Ok(scale.invert(&noisy.with_samples(recon)?))
}

impl Denoiser for RbmParams {
    /// Window-by-window [`denoise_rbm`]; the length must be a multiple of `n_visible`.
    fn denoise(&self, noisy: &Signal) -> Result<Signal> {
        if !noisy.len().is_multiple_of(self.n_visible) {
            return Err(Error::LengthMismatch {
                expected: (noisy.len() / self.n_visible + 1) * self.n_visible,
                actual: noisy.len(),
            });
        }
        let mut out = Vec::with_capacity(noisy.len());
        for chunk in noisy.samples().chunks(self.n_visible) {
            let w = Signal::new(chunk.to_vec(), noisy.fs())?;
            out.extend(denoise_rbm(self, &w)?.into_samples());
        }
        noisy.with_samples(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn energy_examples() {
        let p = RbmParams::zeros(3, 2);
        assert_eq!(p.energy(&[0.0; 3], &[0.0; 2]).unwrap(), 0.0);
        assert_eq!(p.energy(&[1.0, 0.0, 1.0], &[1.0, 1.0]).unwrap(), 0.0);
        let p = RbmParams {
            n_visible: 1,
            n_hidden: 1,
            w: vec![2.0],
            a: vec![0.5],
            b: vec![-0.25],
        };
        assert_eq!(p.energy(&[1.0], &[1.0]).unwrap(), -2.25);
        assert!(p.energy(&[1.0, 0.0], &[1.0]).is_err());
    }

    #[test]
    fn conditionals() {
        let p = RbmParams::zeros(3, 2);
        assert_eq!(p.hidden_given_visible(&[1.0, 0.3, 0.0]).unwrap(), vec![0.5, 0.5]);
        assert_eq!(p.visible_given_hidden(&[1.0, 0.0]).unwrap(), vec![0.5; 3]);
        let mut p = RbmParams::zeros(2, 1);
        p.w = vec![1.0, -1.0];
        assert_eq!(p.hidden_given_visible(&[1.0, 1.0]).unwrap(), vec![0.5]);
        p.b = vec![30.0];
        assert!(p.hidden_given_visible(&[0.0, 0.0]).unwrap()[0] > 1.0 - 1e-9);
        p.a = vec![30.0, 0.0];
        assert!(p.visible_given_hidden(&[0.0]).unwrap()[0] > 1.0 - 1e-9);
        assert!(p.visible_given_hidden(&[0.0, 1.0]).is_err());
    }

    #[test]
    fn uniform_joint_for_zero_params() {
        let p = RbmParams::zeros(3, 2);
        let pr = p.joint_probability(&[1.0, 0.0, 1.0], &[0.0, 1.0]).unwrap();
        assert!((pr - 1.0 / 32.0).abs() < 1e-15);
        assert!(RbmParams::zeros(15, 6).partition_function().is_err());
    }

    #[test]
    fn zero_rate_leaves_params_at_init() {
        let data = vec![vec![0.2, 0.8, 0.5]; 6];
        let cfg = RbmConfig {
            n_hidden: 2,
            learning_rate: 0.0,
            epochs: 3,
            batch_size: 2,
            seed: 8,
        };
        let (p, _) = train_cd1(&data, &cfg).unwrap();
        assert_eq!(p, RbmParams::random(3, 2, 8));
    }

    #[test]
    fn unscaled_input_rejected() {
        let data = vec![vec![0.2, 1.5]];
        assert!(train_cd1(&data, &RbmConfig::default()).is_err());
        let ok = vec![vec![0.0, 1.0 + 1e-12]];
        assert!(train_cd1(&ok, &RbmConfig { epochs: 1, ..RbmConfig::default() }).is_ok());
    }

    #[test]
    fn constant_window_maps_to_zero_visible_reconstruction() {
        let p = RbmParams::random(4, 3, 1);
        let out = denoise_rbm(&p, &Signal::new(vec![2.0; 4], 4).unwrap()).unwrap();
        let base = p.reconstruct(&[0.0; 4]).unwrap();
        for (o, b) in out.samples().iter().zip(&base) {
            assert!((o - (2.0 + b)).abs() < 1e-12);
        }
    }
}
