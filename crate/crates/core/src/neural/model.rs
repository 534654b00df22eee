use alloc::vec;
use alloc::vec::Vec;

// Unused when std is linked, whose inherent float methods take precedence.
#[allow(unused_imports)]
use num_traits::Float;

use super::layers::{mse_loss, relu_backward, relu_forward, BatchNorm, BnCache, Conv1d, Dense, Pool, PoolMode};
use super::optim::{clip_gradients, Adam};
use super::tensor::Tensor;
use crate::rng::{derive_seed, tag, SplitMix64};
use crate::{Denoiser, Error, Result, Signal};

#[derive(Debug, Clone, PartialEq)]
pub struct CnnConfig {
    pub input_len: usize,
    pub num_conv_layers: usize,
    pub filters_per_layer: usize,
    pub kernel_len: usize,
    pub pool_stride: usize,
    pub pool_mode: PoolMode,
    pub learning_rate: f64,
    pub grad_clip_norm: f64,
    pub batch_size: usize,
    pub epochs: usize,
    pub seed: u64,
}

impl Default for CnnConfig {
    fn default() -> Self {
        Self {
            input_len: 360,
            num_conv_layers: 3,
            filters_per_layer: 36,
            kernel_len: 23,
            pool_stride: 4,
            pool_mode: PoolMode::Subsample,
            learning_rate: 0.01,
            grad_clip_norm: 1.0,
            batch_size: 200,
            epochs: 100,
            seed: 0,
        }
    }
}

impl CnnConfig {
    pub fn validate(&self) -> Result<()> {
        if self.kernel_len.is_multiple_of(2) {
            return Err(Error::invalid("kernel length must be odd"));
        }
        if self.input_len == 0 || self.num_conv_layers == 0 || self.filters_per_layer == 0 {
            return Err(Error::invalid("input length, layer count and filters must be positive"));
        }
        if self.pool_stride == 0 || self.batch_size == 0 {
            return Err(Error::invalid("pool stride and batch size must be positive"));
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::invalid("learning rate must be positive"));
        }
        if !(self.grad_clip_norm > 0.0) {
            return Err(Error::invalid("gradient clip norm must be positive"));
        }
        Ok(())
    }

    /// Sequence length entering each block, followed by the length after the last pool.
    pub fn layer_lengths(&self) -> Vec<usize> {
        let mut lens = vec![self.input_len];
        for _ in 0..self.num_conv_layers {
            let last = *lens.last().unwrap();
            lens.push(last.div_ceil(self.pool_stride));
        }
        lens
    }

    fn pool(&self) -> Pool {
        Pool {
            stride: self.pool_stride,
            mode: self.pool_mode,
        }
    }
}

/// Convolution → batch norm → ReLU → pool. The convolution bias stays at
/// zero: batch norm subtracts it again and its β plays the same role.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvBlock {
    pub conv: Conv1d,
    pub bn: BatchNorm,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CnnModel {
    pub config: CnnConfig,
    pub blocks: Vec<ConvBlock>,
    pub fc: Dense,
    /// Per-position mean of the training inputs, subtracted before the first block.
    pub input_mean: Vec<f64>,
}

/// Gradients in the order of [`CnnModel::params_mut`].
pub type Gradients = Vec<Vec<f64>>;

#[derive(Debug, Clone, PartialEq, Default)]
pub struct TrainTrace {
    /// Mean training loss per epoch.
    pub epoch_loss: Vec<f64>,
    /// Square root of the epoch loss, in input units.
    pub epoch_rms: Vec<f64>,
}

struct BlockCache {
    input: Tensor,
    bn: BnCache,
    relu_out: Tensor,
}

struct ForwardCache {
    blocks: Vec<BlockCache>,
    fc_input: Tensor,
}

impl CnnModel {
    /// Fresh model with seeded uniform weights, γ = 1, β = 0 and zero input mean.
    pub fn init(config: CnnConfig) -> Result<Self> {
        config.validate()?;
        let mut rng = SplitMix64::new(derive_seed(config.seed, tag::NEURAL));
        let mut blocks = Vec::with_capacity(config.num_conv_layers);
        for i in 0..config.num_conv_layers {
            let in_ch = if i == 0 { 1 } else { config.filters_per_layer };
            let mut conv = Conv1d::new(in_ch, config.filters_per_layer, config.kernel_len)?;
            conv.init_uniform(&mut rng);
            blocks.push(ConvBlock {
                conv,
                bn: BatchNorm::new(config.filters_per_layer),
            });
        }
        let flat = config.filters_per_layer * config.layer_lengths()[config.num_conv_layers];
        let mut fc = Dense::new(flat, config.input_len);
        fc.init_uniform(&mut rng);
        Ok(Self {
            input_mean: vec![0.0; config.input_len],
            config,
            blocks,
            fc,
        })
    }

    pub fn parameter_count(&self) -> usize {
        self.params().iter().map(|p| p.len()).sum()
    }

    /// Trainable parameters: per block kernel, γ, β; then dense weight and bias.
    pub fn params(&self) -> Vec<&[f64]> {
        let mut out: Vec<&[f64]> = Vec::new();
        for b in &self.blocks {
            out.push(&b.conv.weight);
            out.push(&b.bn.gamma);
            out.push(&b.bn.beta);
        }
        out.push(&self.fc.weight);
        out.push(&self.fc.bias);
        out
    }

    pub fn params_mut(&mut self) -> Vec<&mut [f64]> {
        let mut out: Vec<&mut [f64]> = Vec::new();
        for b in &mut self.blocks {
            out.push(&mut b.conv.weight);
            out.push(&mut b.bn.gamma);
            out.push(&mut b.bn.beta);
        }
        out.push(&mut self.fc.weight);
        out.push(&mut self.fc.bias);
        out
    }

    fn check_input(&self, x: &Tensor) -> Result<()> {
        if x.channels() != 1 || x.len() != self.config.input_len {
            return Err(Error::Shape(alloc::format!(
                "model expects (batch, 1, {}), got {:?}",
                self.config.input_len,
                x.shape()
            )));
        }
        Ok(())
    }

    fn centre(&self, x: &Tensor) -> Tensor {
        let mut x = x.clone();
        for b in 0..x.batch() {
            for (v, m) in x.row_mut(b, 0).iter_mut().zip(&self.input_mean) {
                *v -= m;
            }
        }
        x
    }

    fn forward_train(&self, x: &Tensor) -> Result<(Tensor, ForwardCache)> {
        self.check_input(x)?;
        let pool = self.config.pool();
        let mut h = self.centre(x);
        let mut caches = Vec::with_capacity(self.blocks.len());
        for block in &self.blocks {
            let z = block.conv.forward(&h)?;
            let (y, bn) = block.bn.forward_train(&z)?;
            let relu_out = relu_forward(&y);
            let pooled = pool.forward(&relu_out);
            caches.push(BlockCache {
                input: h,
                bn,
                relu_out,
            });
            h = pooled;
        }
        let out = self.fc.forward(&h)?;
        Ok((
            out,
            ForwardCache {
                blocks: caches,
                fc_input: h,
            },
        ))
    }

    fn backward(&self, cache: &ForwardCache, grad_out: &Tensor) -> Result<Gradients> {
        let pool = self.config.pool();
        let (mut dh, fc_grads) = self.fc.backward(&cache.fc_input, grad_out)?;
        let mut per_block = Vec::with_capacity(self.blocks.len());
        for (i, (block, bc)) in self.blocks.iter().zip(&cache.blocks).enumerate().rev() {
            let d_relu = pool.backward(bc.relu_out.len(), &dh)?;
            let d_bn = relu_backward(&bc.relu_out, &d_relu)?;
            let (d_conv, bn_grads) = block.bn.backward(&bc.bn, &d_bn)?;
            let (d_in, conv_grads) = block.conv.backward(&bc.input, &d_conv, i > 0)?;
            per_block.push((conv_grads.weight, bn_grads.gamma, bn_grads.beta));
            if let Some(d) = d_in {
                dh = d;
            }
        }
        let mut grads = Gradients::new();
        for (w, g, b) in per_block.into_iter().rev() {
            grads.push(w);
            grads.push(g);
            grads.push(b);
        }
        grads.push(fc_grads.weight);
        grads.push(fc_grads.bias);
        Ok(grads)
    }

    /// Training-mode loss and its gradient for one batch, without updating anything.
    pub fn loss_and_gradients(&self, x: &Tensor, target: &Tensor) -> Result<(f64, Gradients)> {
        let (pred, cache) = self.forward_train(x)?;
        let (loss, grad) = mse_loss(&pred, target)?;
        Ok((loss, self.backward(&cache, &grad)?))
    }

    /// Training-mode loss only (batch statistics).
    pub fn loss(&self, x: &Tensor, target: &Tensor) -> Result<f64> {
        let (pred, _) = self.forward_train(x)?;
        Ok(mse_loss(&pred, target)?.0)
    }

    /// Inference forward pass using running batch-norm statistics.
    pub fn predict(&self, x: &Tensor) -> Result<Tensor> {
        self.check_input(x)?;
        let pool = self.config.pool();
        let mut h = self.centre(x);
        for block in &self.blocks {
            let z = block.conv.forward(&h)?;
            let y = block.bn.forward_infer(&z)?;
            h = pool.forward(&relu_forward(&y));
        }
        self.fc.forward(&h)
    }

    /// Trains a fresh model on aligned noisy/clean windows with seeded
    /// mini-batch shuffling, clipping and Adam.
    pub fn train<N: AsRef<[f64]>, C: AsRef<[f64]>>(
        config: CnnConfig,
        noisy: &[N],
        clean: &[C],
    ) -> Result<(Self, TrainTrace)> {
        let mut model = Self::init(config)?;
        if noisy.len() != clean.len() {
            return Err(Error::LengthMismatch {
                expected: noisy.len(),
                actual: clean.len(),
            });
        }
        if noisy.is_empty() {
            return Err(Error::Empty("training pairs"));
        }
        let len = model.config.input_len;
        for w in noisy.iter().map(|w| w.as_ref()).chain(clean.iter().map(|w| w.as_ref())) {
            if w.len() != len {
                return Err(Error::LengthMismatch {
                    expected: len,
                    actual: w.len(),
                });
            }
        }
        let n = noisy.len() as f64;
        for w in noisy {
            for (m, v) in model.input_mean.iter_mut().zip(w.as_ref()) {
                *m += v / n;
            }
        }

        let mut trace = TrainTrace::default();
        let mut adam = Adam::new();
        let mut rng = SplitMix64::new(derive_seed(model.config.seed, tag::NEURAL).rotate_left(29));
        let mut order: Vec<usize> = (0..noisy.len()).collect();
        let batch_size = model.config.batch_size;
        for _ in 0..model.config.epochs {
            rng.shuffle(&mut order);
            let mut loss_sum = 0.0;
            for idx in order.chunks(batch_size) {
                let x = Tensor::from_rows(&idx.iter().map(|&i| noisy[i].as_ref()).collect::<Vec<_>>())?;
                let t = Tensor::from_rows(&idx.iter().map(|&i| clean[i].as_ref()).collect::<Vec<_>>())?;
                let (pred, cache) = model.forward_train(&x)?;
                let (loss, grad) = mse_loss(&pred, &t)?;
                if !loss.is_finite() {
                    return Err(Error::NonFinite("training loss"));
                }
                let mut grads = model.backward(&cache, &grad)?;
                clip_gradients(&mut grads, model.config.grad_clip_norm);
                let lr = model.config.learning_rate;
                adam.step(model.params_mut(), &grads, lr)?;
                for (block, bc) in model.blocks.iter_mut().zip(&cache.blocks) {
                    block.bn.update_running(&bc.bn, idx.len() * bc.relu_out.len());
                }
                loss_sum += loss * idx.len() as f64;
            }
            let epoch_loss = loss_sum / n;
            trace.epoch_loss.push(epoch_loss);
            trace.epoch_rms.push(epoch_loss.sqrt());
        }
        Ok((model, trace))
    }

    /// Denoises a batch of windows, each exactly `input_len` long.
    pub fn denoise_windows<W: AsRef<[f64]>>(&self, windows: &[W]) -> Result<Vec<Vec<f64>>> {
        if windows.is_empty() {
            return Ok(Vec::new());
        }
        let x = Tensor::from_rows(windows)?;
        let y = self.predict(&x)?;
        Ok((0..y.batch()).map(|b| y.row(b, 0).to_vec()).collect())
    }
}

impl Denoiser for CnnModel {
    /// Splits into `input_len` windows, denoises each and concatenates.
    fn denoise(&self, noisy: &Signal) -> Result<Signal> {
        let len = self.config.input_len;
        if !noisy.len().is_multiple_of(len) {
            return Err(Error::LengthMismatch {
                expected: (noisy.len() / len + 1) * len,
                actual: noisy.len(),
            });
        }
        let windows: Vec<&[f64]> = noisy.samples().chunks(len).collect();
        let out = self.denoise_windows(&windows)?;
        noisy.with_samples(out.concat())
    }
}
