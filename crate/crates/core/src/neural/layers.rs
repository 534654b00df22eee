use alloc::vec;
use alloc::vec::Vec;

// Unused when std is linked, whose inherent float methods take precedence.
#[allow(unused_imports)]
use num_traits::Float;

use ndarray::linalg::general_mat_mul;
use ndarray::{Array2, ArrayView2, ArrayViewMut2, Axis};

use super::tensor::{dot, Tensor};
use crate::rng::SplitMix64;
use crate::{Error, Result};

/// Same-padded stride-1 1-D convolution. Weights are `[out][in][k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Conv1d {
    pub in_channels: usize,
    pub out_channels: usize,
    pub kernel_len: usize,
    pub weight: Vec<f64>,
    pub bias: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvGrads {
    pub weight: Vec<f64>,
    pub bias: Vec<f64>,
}

impl Conv1d {
    pub fn new(in_channels: usize, out_channels: usize, kernel_len: usize) -> Result<Self> {
        if kernel_len.is_multiple_of(2) {
            return Err(Error::invalid("kernel length must be odd"));
        }
        if in_channels == 0 || out_channels == 0 {
            return Err(Error::invalid("channel counts must be positive"));
        }
        Ok(Self {
            in_channels,
            out_channels,
            kernel_len,
            weight: vec![0.0; out_channels * in_channels * kernel_len],
            bias: vec![0.0; out_channels],
        })
    }

    /// Uniform in ±1/√fan_in.
    pub fn init_uniform(&mut self, rng: &mut SplitMix64) {
        let bound = 1.0 / ((self.in_channels * self.kernel_len) as f64).sqrt();
        self.weight
            .iter_mut()
            .for_each(|w| *w = rng.uniform(-bound, bound));
    }

    fn weight_matrix(&self) -> ArrayView2<'_, f64> {
        ArrayView2::from_shape((self.out_channels, self.in_channels * self.kernel_len), &self.weight)
            .expect("weight length matches the layer shape")
    }

    /// Row `ci·K + k`, column block `b` holds input channel `ci` of item `b`
    /// shifted by `k − K/2`, zero padded, so the whole batch convolves as one
    /// matrix product.
    fn im2col(&self, x: &Tensor) -> Array2<f64> {
        let (k_len, len) = (self.kernel_len, x.len());
        let mut cols = Array2::zeros((self.in_channels * k_len, x.batch() * len));
        for ci in 0..self.in_channels {
            for k in 0..k_len {
                let (t0, t1, s0) = shifted_range(k, k_len / 2, len);
                let mut row = cols.row_mut(ci * k_len + k);
                let row = row.as_slice_mut().expect("rows are contiguous");
                for b in 0..x.batch() {
                    let input = x.row(b, ci);
                    row[b * len + t0..b * len + t1].copy_from_slice(&input[s0..s0 + (t1 - t0)]);
                }
            }
        }
        cols
    }

    fn check(&self, x: &Tensor) -> Result<()> {
        if x.channels() != self.in_channels {
            return Err(Error::Shape(alloc::format!(
                "convolution expects {} input channels, got {}",
                self.in_channels,
                x.channels()
            )));
        }
        Ok(())
    }

    pub fn forward(&self, x: &Tensor) -> Result<Tensor> {
        self.check(x)?;
        let (batch, len) = (x.batch(), x.len());
        let mut y = Array2::zeros((self.out_channels, batch * len));
        general_mat_mul(1.0, &self.weight_matrix(), &self.im2col(x), 0.0, &mut y);
        let mut out = Tensor::zeros([batch, self.out_channels, len]);
        for (co, row) in y.rows().into_iter().enumerate() {
            let row = row.to_slice().expect("rows are contiguous");
            for b in 0..batch {
                for (o, v) in out.row_mut(b, co).iter_mut().zip(&row[b * len..(b + 1) * len]) {
                    *o = v + self.bias[co];
                }
            }
        }
        Ok(out)
    }

    /// Gradients of the parameters and, if requested, of the input.
    pub fn backward(
        &self,
        x: &Tensor,
        grad_out: &Tensor,
        input_grad: bool,
    ) -> Result<(Option<Tensor>, ConvGrads)> {
        self.check(x)?;
        grad_out.expect_shape([x.batch(), self.out_channels, x.len()], "convolution gradient")?;
        let (batch, len, k_len) = (x.batch(), x.len(), self.kernel_len);
        let mut g = Array2::zeros((self.out_channels, batch * len));
        for (co, mut row) in g.rows_mut().into_iter().enumerate() {
            let row = row.as_slice_mut().expect("rows are contiguous");
            for b in 0..batch {
                row[b * len..(b + 1) * len].copy_from_slice(grad_out.row(b, co));
            }
        }
        let bias = g.sum_axis(Axis(1)).to_vec();
        let w = self.weight_matrix();
        let mut dw = Array2::zeros(w.raw_dim());
        general_mat_mul(1.0, &g, &self.im2col(x).t(), 0.0, &mut dw);
        let dx = input_grad.then(|| {
            let mut dcols = Array2::zeros((self.in_channels * k_len, batch * len));
            general_mat_mul(1.0, &w.t(), &g, 0.0, &mut dcols);
            let mut dx = Tensor::zeros(x.shape());
            for ci in 0..self.in_channels {
                for k in 0..k_len {
                    let (t0, t1, s0) = shifted_range(k, k_len / 2, len);
                    let src = dcols.row(ci * k_len + k);
                    let src = src.to_slice().expect("rows are contiguous");
                    for b in 0..batch {
                        let target = &mut dx.row_mut(b, ci)[s0..s0 + (t1 - t0)];
                        for (d, v) in target.iter_mut().zip(&src[b * len + t0..b * len + t1]) {
                            *d += v;
                        }
                    }
                }
            }
            dx
        });
        let grads = ConvGrads {
            weight: dw.into_raw_vec_and_offset().0,
            bias,
        };
        Ok((dx, grads))
    }
}

/// Output range `t0..t1` that reads input from `s0` onward for tap `k` with
/// centre `half`, on a sequence of `len` samples.
fn shifted_range(k: usize, half: usize, len: usize) -> (usize, usize, usize) {
    if k >= half {
        let shift = (k - half).min(len);
        (0, len - shift, shift)
    } else {
        let shift = (half - k).min(len);
        (shift, len, 0)
    }
}

/// Per-channel batch normalisation over batch × length.
#[derive(Debug, Clone, PartialEq)]
pub struct BatchNorm {
    pub gamma: Vec<f64>,
    pub beta: Vec<f64>,
    pub running_mean: Vec<f64>,
    pub running_var: Vec<f64>,
    /// Weight kept on the old running statistics per update.
    pub momentum: f64,
    pub eps: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BnCache {
    pub xhat: Tensor,
    pub mean: Vec<f64>,
    pub var: Vec<f64>,
    pub inv_std: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BnGrads {
    pub gamma: Vec<f64>,
    pub beta: Vec<f64>,
}

impl BatchNorm {
    pub fn new(channels: usize) -> Self {
        Self {
            gamma: vec![1.0; channels],
            beta: vec![0.0; channels],
            running_mean: vec![0.0; channels],
            running_var: vec![1.0; channels],
            momentum: 0.9,
            eps: 1e-5,
        }
    }

    pub fn channels(&self) -> usize {
        self.gamma.len()
    }

    fn check(&self, x: &Tensor) -> Result<()> {
        if x.channels() != self.channels() {
            return Err(Error::Shape(alloc::format!(
                "batch norm has {} channels, input has {}",
                self.channels(),
                x.channels()
            )));
        }
        Ok(())
    }

    /// Normalises with batch statistics. Running averages are not touched;
    /// call [`BatchNorm::update_running`] with the returned cache.
    pub fn forward_train(&self, x: &Tensor) -> Result<(Tensor, BnCache)> {
        self.check(x)?;
        let (batch, channels, len) = (x.batch(), x.channels(), x.len());
        let m = (batch * len) as f64;
        let mut mean = vec![0.0; channels];
        let mut var = vec![0.0; channels];
        for c in 0..channels {
            let s: f64 = (0..batch).map(|b| x.row(b, c).iter().sum::<f64>()).sum();
            mean[c] = s / m;
            let ss: f64 = (0..batch)
                .map(|b| x.row(b, c).iter().map(|v| (v - mean[c]) * (v - mean[c])).sum::<f64>())
                .sum();
            var[c] = ss / m;
        }
        let inv_std: Vec<f64> = var.iter().map(|v| 1.0 / (v + self.eps).sqrt()).collect();
        let mut xhat = Tensor::zeros(x.shape());
        let mut y = Tensor::zeros(x.shape());
        for b in 0..batch {
            for c in 0..channels {
                let src = x.row(b, c);
                let xh = xhat.row_mut(b, c);
                for (o, v) in xh.iter_mut().zip(src) {
                    *o = (v - mean[c]) * inv_std[c];
                }
                let (g, bt) = (self.gamma[c], self.beta[c]);
                let xh = xhat.row(b, c).to_vec();
                for (o, v) in y.row_mut(b, c).iter_mut().zip(&xh) {
                    *o = g * v + bt;
                }
            }
        }
        Ok((
            y,
            BnCache {
                xhat,
                mean,
                var,
                inv_std,
            },
        ))
    }

    pub fn forward_infer(&self, x: &Tensor) -> Result<Tensor> {
        self.check(x)?;
        let mut y = x.clone();
        for b in 0..x.batch() {
            for c in 0..x.channels() {
                let inv = 1.0 / (self.running_var[c] + self.eps).sqrt();
                let (mu, g, bt) = (self.running_mean[c], self.gamma[c], self.beta[c]);
                y.row_mut(b, c)
                    .iter_mut()
                    .for_each(|v| *v = g * (*v - mu) * inv + bt);
            }
        }
        Ok(y)
    }

    /// Exponential moving average of the batch statistics (unbiased variance).
    pub fn update_running(&mut self, cache: &BnCache, samples_per_channel: usize) {
        let m = samples_per_channel as f64;
        let correction = if m > 1.0 { m / (m - 1.0) } else { 1.0 };
        for c in 0..self.channels() {
            self.running_mean[c] =
                self.momentum * self.running_mean[c] + (1.0 - self.momentum) * cache.mean[c];
            self.running_var[c] = self.momentum * self.running_var[c]
                + (1.0 - self.momentum) * cache.var[c] * correction;
        }
    }

    pub fn backward(&self, cache: &BnCache, grad_out: &Tensor) -> Result<(Tensor, BnGrads)> {
        grad_out.expect_shape(cache.xhat.shape(), "batch norm gradient")?;
        let (batch, channels, len) = (grad_out.batch(), grad_out.channels(), grad_out.len());
        let m = (batch * len) as f64;
        let mut grads = BnGrads {
            gamma: vec![0.0; channels],
            beta: vec![0.0; channels],
        };
        let mut dx = Tensor::zeros(grad_out.shape());
        for c in 0..channels {
            let mut sum_g = 0.0;
            let mut sum_gx = 0.0;
            for b in 0..batch {
                let g = grad_out.row(b, c);
                sum_g += g.iter().sum::<f64>();
                sum_gx += dot(g, cache.xhat.row(b, c));
            }
            grads.beta[c] = sum_g;
            grads.gamma[c] = sum_gx;
            // dx = γ/σ · (g − mean(g) − x̂ · mean(g·x̂))
            let scale = self.gamma[c] * cache.inv_std[c];
            let (mean_g, mean_gx) = (sum_g / m, sum_gx / m);
            for b in 0..batch {
                let g = grad_out.row(b, c);
                let xh = cache.xhat.row(b, c);
                for ((o, gv), xv) in dx.row_mut(b, c).iter_mut().zip(g).zip(xh) {
                    *o = scale * (gv - mean_g - xv * mean_gx);
                }
            }
        }
        Ok((dx, grads))
    }
}

pub fn relu_forward(x: &Tensor) -> Tensor {
    let mut y = x.clone();
    y.data_mut().iter_mut().for_each(|v| *v = v.max(0.0));
    y
}

/// Gradient passes where the forward output was strictly positive; at 0 it is 0.
pub fn relu_backward(output: &Tensor, grad_out: &Tensor) -> Result<Tensor> {
    grad_out.expect_shape(output.shape(), "relu gradient")?;
    let mut dx = grad_out.clone();
    for (d, &y) in dx.data_mut().iter_mut().zip(output.data()) {
        if y <= 0.0 {
            *d = 0.0;
        }
    }
    Ok(dx)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PoolMode {
    /// Pool of size 1: keeps every `stride`-th sample.
    Subsample,
    /// Mean over each window of `stride` samples.
    Mean,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pool {
    pub stride: usize,
    pub mode: PoolMode,
}

impl Pool {
    pub fn out_len(&self, len: usize) -> usize {
        len.div_ceil(self.stride)
    }

    pub fn forward(&self, x: &Tensor) -> Tensor {
        let out_len = self.out_len(x.len());
        let mut y = Tensor::zeros([x.batch(), x.channels(), out_len]);
        for b in 0..x.batch() {
            for c in 0..x.channels() {
                let src = x.row(b, c);
                for (j, o) in y.row_mut(b, c).iter_mut().enumerate() {
                    let start = j * self.stride;
                    *o = match self.mode {
                        PoolMode::Subsample => src[start],
                        PoolMode::Mean => {
                            let w = &src[start..(start + self.stride).min(src.len())];
                            w.iter().sum::<f64>() / w.len() as f64
                        }
                    };
                }
            }
        }
        y
    }

    pub fn backward(&self, input_len: usize, grad_out: &Tensor) -> Result<Tensor> {
        if grad_out.len() != self.out_len(input_len) {
            return Err(Error::Shape(alloc::format!(
                "pool gradient has length {} but {} was expected",
                grad_out.len(),
                self.out_len(input_len)
            )));
        }
        let mut dx = Tensor::zeros([grad_out.batch(), grad_out.channels(), input_len]);
        for b in 0..grad_out.batch() {
            for c in 0..grad_out.channels() {
                let g = grad_out.row(b, c).to_vec();
                let row = dx.row_mut(b, c);
                for (j, gv) in g.into_iter().enumerate() {
                    let start = j * self.stride;
                    match self.mode {
                        PoolMode::Subsample => row[start] = gv,
                        PoolMode::Mean => {
                            let end = (start + self.stride).min(input_len);
                            let share = gv / (end - start) as f64;
                            row[start..end].iter_mut().for_each(|v| *v = share);
                        }
                    }
                }
            }
        }
        Ok(dx)
    }
}

/// Fully connected layer over the flattened `(channels × length)` item.
/// Output shape is `(batch, 1, outputs)`. Weights are `[out][in]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dense {
    pub inputs: usize,
    pub outputs: usize,
    pub weight: Vec<f64>,
    pub bias: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DenseGrads {
    pub weight: Vec<f64>,
    pub bias: Vec<f64>,
}

impl Dense {
    pub fn new(inputs: usize, outputs: usize) -> Self {
        Self {
            inputs,
            outputs,
            weight: vec![0.0; inputs * outputs],
            bias: vec![0.0; outputs],
        }
    }

    pub fn init_uniform(&mut self, rng: &mut SplitMix64) {
        let bound = 1.0 / (self.inputs as f64).sqrt();
        self.weight
            .iter_mut()
            .for_each(|w| *w = rng.uniform(-bound, bound));
    }

    fn check(&self, x: &Tensor) -> Result<()> {
        if x.channels() * x.len() != self.inputs {
            return Err(Error::Shape(alloc::format!(
                "dense layer takes {} inputs, got {}x{}",
                self.inputs,
                x.channels(),
                x.len()
            )));
        }
        Ok(())
    }

    fn weight_matrix(&self) -> ArrayView2<'_, f64> {
        ArrayView2::from_shape((self.outputs, self.inputs), &self.weight)
            .expect("weight length matches the layer shape")
    }

    pub fn forward(&self, x: &Tensor) -> Result<Tensor> {
        self.check(x)?;
        let xs = ArrayView2::from_shape((x.batch(), self.inputs), x.data()).expect("checked shape");
        let mut y = Tensor::zeros([x.batch(), 1, self.outputs]);
        let mut ys = ArrayViewMut2::from_shape((x.batch(), self.outputs), y.data_mut()).expect("fresh tensor");
        general_mat_mul(1.0, &xs, &self.weight_matrix().t(), 0.0, &mut ys);
        for mut row in ys.rows_mut() {
            row.iter_mut().zip(&self.bias).for_each(|(v, b)| *v += b);
        }
        Ok(y)
    }

    pub fn backward(&self, x: &Tensor, grad_out: &Tensor) -> Result<(Tensor, DenseGrads)> {
        self.check(x)?;
        grad_out.expect_shape([x.batch(), 1, self.outputs], "dense gradient")?;
        let xs = ArrayView2::from_shape((x.batch(), self.inputs), x.data()).expect("checked shape");
        let g = ArrayView2::from_shape((x.batch(), self.outputs), grad_out.data()).expect("checked shape");
        let mut dw = Array2::zeros((self.outputs, self.inputs));
        general_mat_mul(1.0, &g.t(), &xs, 0.0, &mut dw);
        let mut dx = Tensor::zeros(x.shape());
        let mut dxs = ArrayViewMut2::from_shape((x.batch(), self.inputs), dx.data_mut()).expect("fresh tensor");
        general_mat_mul(1.0, &g, &self.weight_matrix(), 0.0, &mut dxs);
        let bias = g.sum_axis(Axis(0)).to_vec();
        Ok((
            dx,
            DenseGrads {
                weight: dw.into_raw_vec_and_offset().0,
                bias,
            },
        ))
    }
}

/// Mean over every element of the squared error, and its gradient
/// `2 (pred − target) / count`.
pub fn mse_loss(pred: &Tensor, target: &Tensor) -> Result<(f64, Tensor)> {
    target.expect_shape(pred.shape(), "loss target")?;
    let count = pred.data().len() as f64;
    let mut grad = pred.clone();
    let mut loss = 0.0;
    for (g, &t) in grad.data_mut().iter_mut().zip(target.data()) {
        let d = *g - t;
        loss += d * d;
        *g = 2.0 * d / count;
    }
    Ok((loss / count, grad))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(shape: [usize; 3], v: &[f64]) -> Tensor {
        Tensor::new(shape, v.to_vec()).unwrap()
    }

    #[test]
    fn identity_kernel_passes_input() {
        let mut conv = Conv1d::new(1, 1, 5).unwrap();
        conv.weight[2] = 1.0;
        let x = t([1, 1, 6], &[1.0, -2.0, 3.0, 0.5, 4.0, 7.0]);
        assert_eq!(conv.forward(&x).unwrap(), x);
        let (dx, _) = conv.backward(&x, &x, true).unwrap();
        assert_eq!(dx.unwrap(), x);
    }

    #[test]
    fn box_kernel_by_hand() {
        let mut conv = Conv1d::new(1, 1, 3).unwrap();
        conv.weight.copy_from_slice(&[1.0, 1.0, 1.0]);
        let y = conv.forward(&t([1, 1, 3], &[1.0, 2.0, 3.0])).unwrap();
        assert_eq!(y.data(), &[3.0, 6.0, 5.0]);
    }

    #[test]
    fn zero_kernel_gives_bias() {
        let mut conv = Conv1d::new(2, 3, 3).unwrap();
        conv.bias.iter_mut().for_each(|b| *b = 0.5);
        let y = conv.forward(&Tensor::zeros([2, 2, 7])).unwrap();
        assert!(y.data().iter().all(|&v| v == 0.5));
        assert!(conv.forward(&Tensor::zeros([1, 3, 7])).is_err());
        assert!(Conv1d::new(1, 1, 4).is_err());
    }

    #[test]
    fn zero_upstream_gives_zero_grads() {
        let mut conv = Conv1d::new(2, 2, 3).unwrap();
        conv.init_uniform(&mut SplitMix64::new(1));
        let x = Tensor::new([1, 2, 5], (0..10).map(|i| i as f64).collect()).unwrap();
        let (dx, g) = conv.backward(&x, &Tensor::zeros([1, 2, 5]), true).unwrap();
        assert!(g.weight.iter().chain(&g.bias).all(|&v| v == 0.0));
        assert!(dx.unwrap().data().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn batchnorm_constant_channel_outputs_beta() {
        let mut bn = BatchNorm::new(1);
        bn.beta[0] = 0.7;
        bn.gamma[0] = 3.0;
        let (y, _) = bn.forward_train(&t([2, 1, 3], &[2.0; 6])).unwrap();
        assert!(y.data().iter().all(|&v| v == 0.7));
    }

    #[test]
    fn batchnorm_normalises() {
        let bn = BatchNorm::new(2);
        let mut rng = SplitMix64::new(4);
        let x = Tensor::new([4, 2, 9], (0..72).map(|_| rng.uniform(-3.0, 5.0)).collect()).unwrap();
        let (y, _) = bn.forward_train(&x).unwrap();
        for c in 0..2 {
            let vals: Vec<f64> = (0..4).flat_map(|b| y.row(b, c).to_vec()).collect();
            let mean = vals.iter().sum::<f64>() / vals.len() as f64;
            let var = vals.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / vals.len() as f64;
            assert!(mean.abs() < 1e-9);
            assert!((var - 1.0).abs() < 1e-5 * 2.0, "{var}");
        }
    }

    #[test]
    fn batchnorm_running_stats_and_inference() {
        let mut bn = BatchNorm::new(1);
        let x = t([1, 1, 4], &[1.0, 2.0, 3.0, 4.0]);
        let (_, cache) = bn.forward_train(&x).unwrap();
        bn.update_running(&cache, 4);
        assert!((bn.running_mean[0] - 0.25).abs() < 1e-15);
        let unbiased = 1.25 * 4.0 / 3.0;
        assert!((bn.running_var[0] - (0.9 + 0.1 * unbiased)).abs() < 1e-15);
        let y = bn.forward_infer(&x).unwrap();
        let inv = 1.0 / (bn.running_var[0] + 1e-5f64).sqrt();
        assert!((y.data()[0] - (1.0 - 0.25) * inv).abs() < 1e-15);
    }

    #[test]
    fn relu_examples() {
        let x = t([1, 1, 3], &[-1.0, 0.0, 2.0]);
        let y = relu_forward(&x);
        assert_eq!(y.data(), &[0.0, 0.0, 2.0]);
        let g = relu_backward(&y, &t([1, 1, 3], &[1.0, 1.0, 1.0])).unwrap();
        assert_eq!(g.data(), &[0.0, 0.0, 1.0]);
    }

    #[test]
    fn pool_lengths() {
        let pool = Pool { stride: 4, mode: PoolMode::Subsample };
        let x = Tensor::new([1, 1, 8], (0..8).map(|i| i as f64).collect()).unwrap();
        assert_eq!(pool.forward(&x).data(), &[0.0, 4.0]);
        assert_eq!(pool.out_len(360), 90);
        assert_eq!(pool.out_len(90), 23);
        assert_eq!(pool.out_len(23), 6);
        let g = pool.backward(8, &t([1, 1, 2], &[1.0, 2.0])).unwrap();
        assert_eq!(g.data(), &[1.0, 0.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0]);
        assert!(pool.backward(9, &t([1, 1, 2], &[1.0, 2.0])).is_err());
    }

    #[test]
    fn mean_pool_averages() {
        let pool = Pool { stride: 4, mode: PoolMode::Mean };
        let x = Tensor::new([1, 1, 6], (0..6).map(|i| i as f64).collect()).unwrap();
        assert_eq!(pool.forward(&x).data(), &[1.5, 4.5]);
    }

    #[test]
    fn dense_identity_and_bias() {
        let mut fc = Dense::new(3, 3);
        for i in 0..3 {
            fc.weight[i * 3 + i] = 1.0;
        }
        let x = t([1, 1, 3], &[1.0, -2.0, 3.0]);
        assert_eq!(fc.forward(&x).unwrap(), x);
        let mut fc = Dense::new(3, 2);
        fc.bias.copy_from_slice(&[0.5, -1.0]);
        assert_eq!(fc.forward(&x).unwrap().data(), &[0.5, -1.0]);
        assert!(fc.forward(&t([1, 1, 2], &[1.0, 2.0])).is_err());
    }

    #[test]
    fn mse_examples() {
        let p = t([2, 1, 2], &[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(mse_loss(&p, &p).unwrap().0, 0.0);
        let shifted = t([2, 1, 2], &[0.0, 1.0, 2.0, 3.0]);
        let (loss, grad) = mse_loss(&p, &shifted).unwrap();
        assert_eq!(loss, 1.0);
        assert_eq!(grad.data(), &[0.5; 4]);
        assert!(mse_loss(&p, &t([1, 1, 2], &[0.0, 0.0])).is_err());
    }
}
