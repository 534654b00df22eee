//! Central-difference gradient checks shared by the core test suite and the
//! acceptance run. Every check returns the worst relative error it saw.

use ecg_lab_core::neural::{
    mse_loss, relu_backward, relu_forward, BatchNorm, CnnConfig, CnnModel, Conv1d, Dense, Pool, PoolMode, Tensor,
};
use ecg_lab_core::rng::SplitMix64;

pub const EPS: f64 = 1e-6;
pub const TOLERANCE: f64 = 1e-4;

/// `|a − n| / max(|a|, |n|)`, treating pairs that are both below 1e-7 as equal.
pub fn relative_error(analytic: f64, numeric: f64) -> f64 {
    let scale = analytic.abs().max(numeric.abs());
    if scale < 1e-7 {
        0.0
    } else {
        (analytic - numeric).abs() / scale
    }
}

/// Central differences of `f` at `x`.
pub fn numeric_gradient(x: &[f64], f: impl Fn(&[f64]) -> f64) -> Vec<f64> {
    let mut probe = x.to_vec();
    (0..x.len())
        .map(|i| {
            probe[i] = x[i] + EPS;
            let up = f(&probe);
            probe[i] = x[i] - EPS;
            let down = f(&probe);
            probe[i] = x[i];
            (up - down) / (2.0 * EPS)
        })
        .collect()
}

pub fn worst(analytic: &[f64], numeric: &[f64]) -> f64 {
    assert_eq!(analytic.len(), numeric.len());
    analytic
        .iter()
        .zip(numeric)
        .map(|(&a, &n)| relative_error(a, n))
        .fold(0.0, f64::max)
}

fn random_vec(rng: &mut SplitMix64, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.normal()).collect()
}

fn random_tensor(rng: &mut SplitMix64, shape: [usize; 3]) -> Tensor {
    Tensor::new(shape, random_vec(rng, shape.iter().product())).unwrap()
}

/// `Σ r ⊙ y`, whose gradient with respect to `y` is `r`.
fn projection(y: &Tensor, r: &[f64]) -> f64 {
    y.data().iter().zip(r).map(|(a, b)| a * b).sum()
}

pub fn conv_check(seed: u64) -> f64 {
    let mut rng = SplitMix64::new(seed);
    let mut conv = Conv1d::new(2, 3, 3).unwrap();
    conv.init_uniform(&mut rng);
    conv.bias = random_vec(&mut rng, 3);
    let x = random_tensor(&mut rng, [2, 2, 7]);
    let r = random_vec(&mut rng, 2 * 3 * 7);
    let g = Tensor::new([2, 3, 7], r.clone()).unwrap();
    let (dx, grads) = conv.backward(&x, &g, true).unwrap();

    let nx = numeric_gradient(x.data(), |v| {
        projection(&conv.forward(&Tensor::new(x.shape(), v.to_vec()).unwrap()).unwrap(), &r)
    });
    let nw = numeric_gradient(&conv.weight, |v| {
        let mut c = conv.clone();
        c.weight = v.to_vec();
        projection(&c.forward(&x).unwrap(), &r)
    });
    let nb = numeric_gradient(&conv.bias, |v| {
        let mut c = conv.clone();
        c.bias = v.to_vec();
        projection(&c.forward(&x).unwrap(), &r)
    });
    worst(dx.unwrap().data(), &nx)
        .max(worst(&grads.weight, &nw))
        .max(worst(&grads.bias, &nb))
}

pub fn batch_norm_check(seed: u64) -> f64 {
    let mut rng = SplitMix64::new(seed);
    let mut bn = BatchNorm::new(2);
    bn.gamma = random_vec(&mut rng, 2);
    bn.beta = random_vec(&mut rng, 2);
    let x = random_tensor(&mut rng, [3, 2, 5]);
    let r = random_vec(&mut rng, 30);
    let (_, cache) = bn.forward_train(&x).unwrap();
    let (dx, grads) = bn.backward(&cache, &Tensor::new([3, 2, 5], r.clone()).unwrap()).unwrap();

    let eval = |bn: &BatchNorm, x: &Tensor| projection(&bn.forward_train(x).unwrap().0, &r);
    let nx = numeric_gradient(x.data(), |v| eval(&bn, &Tensor::new(x.shape(), v.to_vec()).unwrap()));
    let ng = numeric_gradient(&bn.gamma, |v| {
        let mut b = bn.clone();
        b.gamma = v.to_vec();
        eval(&b, &x)
    });
    let nb = numeric_gradient(&bn.beta, |v| {
        let mut b = bn.clone();
        b.beta = v.to_vec();
        eval(&b, &x)
    });
    worst(dx.data(), &nx).max(worst(&grads.gamma, &ng)).max(worst(&grads.beta, &nb))
}

pub fn relu_check(seed: u64) -> f64 {
    let mut rng = SplitMix64::new(seed);
    // Keep inputs away from the kink, where the derivative is undefined.
    let data: Vec<f64> = (0..24)
        .map(|_| {
            let v = rng.normal();
            if v.abs() < 0.1 { v.signum() * 0.1 + v } else { v }
        })
        .collect();
    let x = Tensor::new([2, 3, 4], data).unwrap();
    let r = random_vec(&mut rng, 24);
    let y = relu_forward(&x);
    let dx = relu_backward(&y, &Tensor::new([2, 3, 4], r.clone()).unwrap()).unwrap();
    let nx = numeric_gradient(x.data(), |v| {
        projection(&relu_forward(&Tensor::new(x.shape(), v.to_vec()).unwrap()), &r)
    });
    worst(dx.data(), &nx)
}

pub fn pool_check(seed: u64, mode: PoolMode) -> f64 {
    let mut rng = SplitMix64::new(seed);
    let pool = Pool { stride: 4, mode };
    let x = random_tensor(&mut rng, [2, 2, 9]);
    let out = pool.out_len(9);
    let r = random_vec(&mut rng, 2 * 2 * out);
    let dx = pool.backward(9, &Tensor::new([2, 2, out], r.clone()).unwrap()).unwrap();
    let nx = numeric_gradient(x.data(), |v| {
        projection(&pool.forward(&Tensor::new(x.shape(), v.to_vec()).unwrap()), &r)
    });
    worst(dx.data(), &nx)
}

pub fn dense_check(seed: u64) -> f64 {
    let mut rng = SplitMix64::new(seed);
    let mut fc = Dense::new(6, 4);
    fc.init_uniform(&mut rng);
    fc.bias = random_vec(&mut rng, 4);
    let x = random_tensor(&mut rng, [3, 2, 3]);
    let r = random_vec(&mut rng, 12);
    let (dx, grads) = fc.backward(&x, &Tensor::new([3, 1, 4], r.clone()).unwrap()).unwrap();
    let nx = numeric_gradient(x.data(), |v| {
        projection(&fc.forward(&Tensor::new(x.shape(), v.to_vec()).unwrap()).unwrap(), &r)
    });
    let nw = numeric_gradient(&fc.weight, |v| {
        let mut d = fc.clone();
        d.weight = v.to_vec();
        projection(&d.forward(&x).unwrap(), &r)
    });
    let nb = numeric_gradient(&fc.bias, |v| {
        let mut d = fc.clone();
        d.bias = v.to_vec();
        projection(&d.forward(&x).unwrap(), &r)
    });
    worst(dx.data(), &nx).max(worst(&grads.weight, &nw)).max(worst(&grads.bias, &nb))
}

pub fn mse_check(seed: u64) -> f64 {
    let mut rng = SplitMix64::new(seed);
    let pred = random_tensor(&mut rng, [2, 1, 6]);
    let target = random_tensor(&mut rng, [2, 1, 6]);
    let (_, grad) = mse_loss(&pred, &target).unwrap();
    let n = numeric_gradient(pred.data(), |v| {
        mse_loss(&Tensor::new(pred.shape(), v.to_vec()).unwrap(), &target).unwrap().0
    });
    worst(grad.data(), &n)
}

/// The two-block, two-filter network on length-12 inputs.
pub fn small_network() -> CnnModel {
    let config = CnnConfig {
        input_len: 12,
        num_conv_layers: 2,
        filters_per_layer: 2,
        kernel_len: 3,
        ..CnnConfig::default()
    };
    CnnModel::init(config).unwrap()
}

pub fn network_check(seed: u64) -> f64 {
    let mut rng = SplitMix64::new(seed);
    let model = small_network();
    let x = random_tensor(&mut rng, [4, 1, 12]);
    let t = random_tensor(&mut rng, [4, 1, 12]);
    let (_, grads) = model.loss_and_gradients(&x, &t).unwrap();
    let params: Vec<Vec<f64>> = model.params().iter().map(|p| p.to_vec()).collect();
    let mut err: f64 = 0.0;
    for (k, p) in params.iter().enumerate() {
        let n = numeric_gradient(p, |v| {
            let mut m = model.clone();
            m.params_mut()[k].copy_from_slice(v);
            m.loss(&x, &t).unwrap()
        });
        err = err.max(worst(&grads[k], &n));
    }
    err
}

/// Every check with its name and worst relative error.
pub fn all_checks(seed: u64) -> Vec<(&'static str, f64)> {
    vec![
        ("conv1d", conv_check(seed)),
        ("batch_norm", batch_norm_check(seed)),
        ("relu", relu_check(seed)),
        ("subsample_pool", pool_check(seed, PoolMode::Subsample)),
        ("mean_pool", pool_check(seed, PoolMode::Mean)),
        ("dense", dense_check(seed)),
        ("mse", mse_check(seed)),
        ("network", network_check(seed)),
    ]
}
