use alloc::vec;
use alloc::vec::Vec;

// Unused when std is linked, whose inherent float methods take precedence.
#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result};

/// Bias-corrected Adam. Moment buffers are allocated on the first step and
/// follow the order of the parameter slices passed in.
#[derive(Debug, Clone, PartialEq)]
pub struct Adam {
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
    m: Vec<Vec<f64>>,
    v: Vec<Vec<f64>>,
    t: u64,
}

impl Default for Adam {
    fn default() -> Self {
        Self {
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
            m: Vec::new(),
            v: Vec::new(),
            t: 0,
        }
    }
}

impl Adam {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn steps(&self) -> u64 {
        self.t
    }

    pub fn first_moments(&self) -> &[Vec<f64>] {
        &self.m
    }

    pub fn second_moments(&self) -> &[Vec<f64>] {
        &self.v
    }

    pub fn step(&mut self, params: Vec<&mut [f64]>, grads: &[Vec<f64>], lr: f64) -> Result<()> {
        if params.len() != grads.len() {
            return Err(Error::LengthMismatch {
                expected: params.len(),
                actual: grads.len(),
            });
        }
        for (p, g) in params.iter().zip(grads) {
            if p.len() != g.len() {
                return Err(Error::LengthMismatch {
                    expected: p.len(),
                    actual: g.len(),
                });
            }
        }
        if grads.iter().flatten().any(|g| !g.is_finite()) {
            return Err(Error::NonFinite("gradient"));
        }
        if self.m.is_empty() {
            self.m = grads.iter().map(|g| vec![0.0; g.len()]).collect();
            self.v = self.m.clone();
        }
        self.t += 1;
        let c1 = 1.0 - self.beta1.powi(self.t as i32);
        let c2 = 1.0 - self.beta2.powi(self.t as i32);
        for (i, (p, g)) in params.into_iter().zip(grads).enumerate() {
            let (m, v) = (&mut self.m[i], &mut self.v[i]);
            for j in 0..p.len() {
                m[j] = self.beta1 * m[j] + (1.0 - self.beta1) * g[j];
                v[j] = self.beta2 * v[j] + (1.0 - self.beta2) * g[j] * g[j];
                p[j] -= lr * (m[j] / c1) / ((v[j] / c2).sqrt() + self.eps);
            }
        }
        Ok(())
    }
}

pub fn global_norm(grads: &[Vec<f64>]) -> f64 {
    grads.iter().flatten().map(|g| g * g).sum::<f64>().sqrt()
}

/// Rescales every gradient by `max_norm / norm` when the global L2 norm
/// exceeds `max_norm`. Returns the norm before clipping.
pub fn clip_gradients(grads: &mut [Vec<f64>], max_norm: f64) -> f64 {
    let norm = global_norm(grads);
    if norm > max_norm {
        let s = max_norm / norm;
        grads.iter_mut().flatten().for_each(|g| *g *= s);
    }
    norm
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_step_moves_by_lr() {
        let mut w = [1.0];
        let mut adam = Adam::new();
        adam.step(vec![&mut w[..]], &[vec![2.0 * 1.0]], 0.01).unwrap();
        assert!((w[0] - 0.99).abs() < 1e-8);
    }

    #[test]
    fn zero_gradient_keeps_params_and_decays_moments() {
        let mut w = [0.3, -0.2];
        let mut adam = Adam::new();
        adam.step(vec![&mut w[..]], &[vec![0.0, 0.0]], 0.01).unwrap();
        assert_eq!(w, [0.3, -0.2]);

        adam.step(vec![&mut w[..]], &[vec![1.0, 1.0]], 0.01).unwrap();
        let (m, v) = (adam.first_moments()[0][0], adam.second_moments()[0][0]);
        adam.step(vec![&mut w[..]], &[vec![0.0, 0.0]], 0.01).unwrap();
        assert_eq!(adam.first_moments()[0][0], 0.9 * m);
        assert_eq!(adam.second_moments()[0][0], 0.999 * v);
    }

    #[test]
    fn non_finite_gradient_rejected() {
        let mut w = [1.0];
        let mut adam = Adam::new();
        assert_eq!(
            adam.step(vec![&mut w[..]], &[vec![f64::NAN]], 0.01),
            Err(Error::NonFinite("gradient"))
        );
        assert_eq!(w[0], 1.0);
    }

    #[test]
    fn clipping() {
        let mut g = vec![vec![0.3, 0.4]];
        clip_gradients(&mut g, 1.0);
        assert_eq!(g, vec![vec![0.3, 0.4]]);
        let mut g = vec![vec![1.2], vec![1.6]];
        assert_eq!(clip_gradients(&mut g, 1.0), 2.0);
        assert!((global_norm(&g) - 1.0).abs() < 1e-12);
        let mut z = vec![vec![0.0; 3]];
        clip_gradients(&mut z, 1.0);
        assert_eq!(z, vec![vec![0.0; 3]]);
    }
}
