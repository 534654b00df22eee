//! Synthetic ECG from the three-variable limit-cycle model.
//!
//! The trajectory circles the unit circle in the (x, y) plane at angular
//! velocity ω; every time the phase passes one of the five PQRST angles the
//! z coordinate receives a Gaussian-shaped kick. z sampled at `fs` is the ECG.

use alloc::vec::Vec;
use core::f64::consts::PI;

// Unused when std is linked, whose inherent float methods take precedence.
#[allow(unused_imports)]
use num_traits::Float;

use crate::rng::SplitMix64;
use crate::signal::window_len;
use crate::{Error, Result, Signal};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Wave {
    P,
    Q,
    R,
    S,
    T,
}

/// One Gaussian event on the phase circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spike {
    pub wave: Wave,
    /// Phase angle in radians, within (−π, π].
    pub theta: f64,
    /// Amplitude coefficient.
    pub a: f64,
    /// Angular width in radians.
    pub b: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EcgModelParams {
    pub spikes: [Spike; 5],
    /// Baseline in mV.
    pub z0: f64,
    pub heart_rate_bpm: f64,
    /// Peak-to-peak amplitude of generated signals, mV.
    pub voltage_scale: f64,
}

impl Default for EcgModelParams {
    /// Canonical PQRST morphology of the original dynamical model at 60 bpm.
    fn default() -> Self {
        Self {
            spikes: [
                Spike { wave: Wave::P, theta: -PI / 3.0, a: 1.2, b: 0.25 },
                Spike { wave: Wave::Q, theta: -PI / 12.0, a: -5.0, b: 0.1 },
                Spike { wave: Wave::R, theta: 0.0, a: 30.0, b: 0.1 },
                Spike { wave: Wave::S, theta: PI / 12.0, a: -7.5, b: 0.1 },
                Spike { wave: Wave::T, theta: PI / 2.0, a: 0.75, b: 0.4 },
            ],
            z0: 0.0,
            heart_rate_bpm: 60.0,
            voltage_scale: 2.0,
        }
    }
}

impl EcgModelParams {
    pub fn with_heart_rate(mut self, bpm: f64) -> Self {
        self.heart_rate_bpm = bpm;
        self
    }

    pub fn with_voltage_scale(mut self, mv: f64) -> Self {
        self.voltage_scale = mv;
        self
    }

    /// Angular velocity in rad/s.
    pub fn omega(&self) -> f64 {
        omega(self.heart_rate_bpm)
    }

    pub fn validate(&self) -> Result<()> {
        let order = [Wave::P, Wave::Q, Wave::R, Wave::S, Wave::T];
        for (spike, wave) in self.spikes.iter().zip(order) {
            if spike.wave != wave {
                return Err(Error::invalid("spikes must be listed in P, Q, R, S, T order"));
            }
            if !(spike.b > 0.0) {
                return Err(Error::invalid("spike widths must be positive"));
            }
            if !(spike.theta > -PI && spike.theta <= PI) {
                return Err(Error::invalid("spike angles must lie in (-pi, pi]"));
            }
        }
        if self.spikes.windows(2).any(|w| w[0].theta >= w[1].theta) {
            return Err(Error::invalid("spike angles must be strictly increasing"));
        }
        if !(self.heart_rate_bpm > 0.0) {
            return Err(Error::invalid("heart rate must be positive"));
        }
        if !self.voltage_scale.is_finite() || !self.z0.is_finite() {
            return Err(Error::NonFinite("model parameters"));
        }
        Ok(())
    }
}

fn omega(bpm: f64) -> f64 {
    2.0 * PI * bpm / 60.0
}

/// Wraps an angle difference into (−π, π].
pub fn wrap_angle(d: f64) -> f64 {
    let r = num_traits::Euclid::rem_euclid(&d, &(2.0 * PI));
    if r > PI {
        r - 2.0 * PI
    } else {
        r
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryState {
    pub x: f64,
    pub y: f64,
    /// ECG value, mV (before peak-to-peak scaling).
    pub z: f64,
    /// Seconds.
    pub t: f64,
}

impl TrajectoryState {
    /// On the unit circle at phase −π with z at the baseline.
    pub fn start(params: &EcgModelParams) -> Self {
        Self {
            x: -1.0,
            y: 0.0,
            z: params.z0,
            t: 0.0,
        }
    }

    pub fn radius(&self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn phase(&self) -> f64 {
        self.y.atan2(self.x)
    }
}

fn derivative(params: &EcgModelParams, w: f64, x: f64, y: f64, z: f64) -> (f64, f64, f64) {
    let alpha = 1.0 - x.hypot(y);
    let theta = y.atan2(x);
    let forcing: f64 = params
        .spikes
        .iter()
        .map(|s| {
            let d = wrap_angle(theta - s.theta);
            s.a * d * (-d * d / (2.0 * s.b * s.b)).exp()
        })
        .sum();
    (alpha * x - w * y, alpha * y + w * x, -forcing - (z - params.z0))
}

/// One classical fourth-order Runge–Kutta step at the params' heart rate.
pub fn rk4_step(state: TrajectoryState, params: &EcgModelParams, dt: f64) -> TrajectoryState {
    rk4_step_at(state, params, params.omega(), dt)
}

fn rk4_step_at(s: TrajectoryState, params: &EcgModelParams, w: f64, dt: f64) -> TrajectoryState {
    let f = |x, y, z| derivative(params, w, x, y, z);
    let k1 = f(s.x, s.y, s.z);
    let k2 = f(s.x + 0.5 * dt * k1.0, s.y + 0.5 * dt * k1.1, s.z + 0.5 * dt * k1.2);
    let k3 = f(s.x + 0.5 * dt * k2.0, s.y + 0.5 * dt * k2.1, s.z + 0.5 * dt * k2.2);
    let k4 = f(s.x + dt * k3.0, s.y + dt * k3.1, s.z + dt * k3.2);
    TrajectoryState {
        x: s.x + dt / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0),
        y: s.y + dt / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1),
        z: s.z + dt / 6.0 * (k1.2 + 2.0 * k2.2 + 2.0 * k3.2 + k4.2),
        t: s.t + dt,
    }
}

/// Clean ECG of `duration_s` seconds at one heart rate, scaled to the
/// params' peak-to-peak voltage. One integration step per output sample.
pub fn generate_ecg(params: &EcgModelParams, duration_s: f64, fs: u32) -> Result<Signal> {
    generate_ecg_segments(params, &[(params.heart_rate_bpm, duration_s)], fs)
}

/// Like [`generate_ecg`] but the heart rate changes between consecutive
/// `(bpm, seconds)` segments while the trajectory stays continuous.
pub fn generate_ecg_segments(
    params: &EcgModelParams,
    segments: &[(f64, f64)],
    fs: u32,
) -> Result<Signal> {
    params.validate()?;
    if segments.is_empty() {
        return Err(Error::Empty("heart-rate segments"));
    }
    let dt = 1.0 / fs as f64;
    let mut state = TrajectoryState::start(params);
    let mut z = Vec::new();
    for &(bpm, seconds) in segments {
        if !(bpm > 0.0) {
            return Err(Error::invalid("heart rate must be positive"));
        }
        let n = window_len(seconds, fs)?;
        let w = omega(bpm);
        z.reserve(n);
        for _ in 0..n {
            z.push(state.z);
            state = rk4_step_at(state, params, w, dt);
        }
    }
    let signal = Signal::new(z, fs)?;
    let ptp = signal.peak_to_peak();
    Ok(if ptp > 0.0 {
        signal.scaled(params.voltage_scale / ptp)
    } else {
        signal
    })
}

/// A record whose heart rate is redrawn uniformly from `rate_range_bpm`
/// every `segment_s` seconds.
pub fn generate_varying_record(
    params: &EcgModelParams,
    duration_s: f64,
    segment_s: f64,
    rate_range_bpm: (f64, f64),
    fs: u32,
    seed: u64,
) -> Result<Signal> {
    let total = window_len(duration_s, fs)?;
    let per = window_len(segment_s, fs)?;
    let mut rng = SplitMix64::new(crate::rng::derive_seed(seed, crate::rng::tag::SYNTH));
    let mut segments = Vec::new();
    let mut left = total;
    while left > 0 {
        let n = per.min(left);
        let bpm = rng.uniform(rate_range_bpm.0, rate_range_bpm.1);
        segments.push((bpm, n as f64 / fs as f64));
        left -= n;
    }
    generate_ecg_segments(params, &segments, fs)
}

/// One beat cycle at the params' heart rate; the cycle length must be a
/// whole number of samples.
pub fn single_beat(params: &EcgModelParams, fs: u32) -> Result<Signal> {
    generate_ecg(params, 60.0 / params.heart_rate_bpm, fs)
}

/// Bandwidth (Hz) below which 99% of the non-DC energy of one periodic beat lies.
pub fn beat_bandwidth(beat: &Signal) -> f64 {
    let x = beat.samples();
    let n = x.len();
    let half = n / 2;
    let mut energy = Vec::with_capacity(half + 1);
    for k in 0..=half {
        let (mut re, mut im) = (0.0, 0.0);
        for (j, &v) in x.iter().enumerate() {
            let ang = -2.0 * PI * ((k * j) % n) as f64 / n as f64;
            re += v * ang.cos();
            im += v * ang.sin();
        }
        energy.push(re * re + im * im);
    }
    let total: f64 = energy[1..].iter().sum();
    if total == 0.0 {
        return 0.0;
    }
    let mut acc = 0.0;
    for (k, e) in energy.iter().enumerate().skip(1) {
        acc += e;
        if acc >= 0.99 * total {
            return k as f64 * beat.fs() as f64 / n as f64;
        }
    }
    beat.fs() as f64 / 2.0
}

/// Multi-beat signals at each requested rate, built by time-compressing and
/// tiling one resting beat cycle with linear interpolation.
pub fn generate_effort_family(
    rest_beat: &Signal,
    rates_bpm: &[f64],
    fs: u32,
    duration_s: f64,
) -> Result<Vec<Signal>> {
    if rates_bpm.is_empty() {
        return Ok(Vec::new());
    }
    if rest_beat.fs() != fs {
        return Err(Error::RateMismatch(rest_beat.fs(), fs));
    }
    if rest_beat.len() < 4 {
        return Err(Error::TooShort {
            needed: 3,
            actual: rest_beat.len(),
        });
    }
    let n_out = window_len(duration_s, fs)?;
    let beat = rest_beat.samples();
    let len = beat.len();
    let rest_bpm = 60.0 * fs as f64 / len as f64;
    let bandwidth = beat_bandwidth(rest_beat);

    rates_bpm
        .iter()
        .map(|&bpm| {
            if !(bpm > 0.0) {
                return Err(Error::invalid("heart rate must be positive"));
            }
            let compression = bpm / rest_bpm;
            if bandwidth * compression >= fs as f64 / 2.0 {
                return Err(Error::Aliasing {
                    rate_bpm: bpm,
                    bandwidth_hz: bandwidth * compression,
                });
            }
            let samples = (0..n_out)
                .map(|i| {
                    let pos = (i as f64 * compression) % len as f64;
                    let idx = pos.floor() as usize % len;
                    let frac = pos - pos.floor();
                    beat[idx] * (1.0 - frac) + beat[(idx + 1) % len] * frac
                })
                .collect();
            Signal::new(samples, fs)
        })
        .collect()
}
