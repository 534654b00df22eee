//! Numerical core of the ECG denoising lab.
//!
//! Everything here is `no_std` and only needs an allocator: synthetic ECG
//! generation, calibrated noise, zero-phase IIR filtering, discrete wavelet
//! shrinkage, a trainable 1-D convolutional regression network, a restricted
//! Boltzmann machine, RMS/SNR evaluation, dataset construction and the
//! architecture sweep selection logic. File formats, reports and the command
//! line live in the `ecg-lab` crate.

#![no_std]
#![forbid(unsafe_code)]
// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod datasets;
pub mod doe;
pub mod error;
pub mod filters;
pub mod metrics;
pub mod neural;
pub mod noise;
pub mod rbm;
pub mod rng;
pub mod signal;
pub mod synth;
pub mod wavelet;

pub use error::{Error, Result};
pub use signal::{Signal, Window};

/// Anything that maps a noisy window to a denoised one.
pub trait Denoiser {
    fn denoise(&self, noisy: &Signal) -> Result<Signal>;
}
