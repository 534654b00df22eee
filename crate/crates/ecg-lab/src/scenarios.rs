//! Synthetic stand-ins for recorded data: the filter-chain fixtures and a
//! small set of distinct "records".

use ecg_lab_core::noise::{random_noise, snr_gain};
use ecg_lab_core::rng::{derive_seed, substream, tag, SplitMix64};
use ecg_lab_core::synth::{generate_ecg, generate_varying_record, EcgModelParams};
use ecg_lab_core::{Result, Signal};

pub const FS: u32 = 360;

/// Morphology whose content sits inside the chain's 0.1–30 Hz passband:
/// the default waves widened fourfold.
pub fn in_band_params() -> EcgModelParams {
    let mut p = EcgModelParams::default();
    for s in p.spikes.iter_mut() {
        s.b *= 4.0;
    }
    p
}

/// One fixture for the classical chain: an in-band ECG at 60–80 bpm plus
/// 50 Hz hum, 0.2 Hz drift and white noise, mixed to an SNR between 0 and
/// 6 dB. Hum and drift each carry 40% of the noise power, white noise 20%.
pub fn chain_fixture(index: usize, seed: u64) -> Result<(Signal, Signal)> {
    let item = substream(derive_seed(seed, tag::NOISE), index as u64);
    let mut rng = SplitMix64::new(item);
    let bpm = rng.uniform(60.0, 80.0);
    let snr_db = rng.uniform(0.0, 6.0);
    let hum_phase = rng.uniform(0.0, std::f64::consts::TAU);
    let drift_phase = rng.uniform(0.0, std::f64::consts::TAU);
    let clean = generate_ecg(&in_band_params().with_heart_rate(bpm), 10.0, FS)?;
    let n = clean.len();
    let tone = |f: f64, phase: f64| -> Result<Signal> {
        let samples = (0..n)
            .map(|i| (std::f64::consts::TAU * f * i as f64 / FS as f64 + phase).sin() * std::f64::consts::SQRT_2)
            .collect();
        Signal::new(samples, FS)
    };
    let hum = tone(50.0, hum_phase)?;
    let drift = tone(0.2, drift_phase)?;
    let white = random_noise(n, FS, item)?;
    let white = white.scaled((n as f64 / white.power()).sqrt());
    let mix = hum
        .scaled(0.4f64.sqrt())
        .add(&drift.scaled(0.4f64.sqrt()))?
        .add(&white.scaled(0.2f64.sqrt()))?;
    let g = snr_gain(&clean, &mix, snr_db)?;
    let noisy = clean.add(&mix.scaled(g))?;
    Ok((clean, noisy))
}

/// A synthetic record: morphology variant plus heart-rate range.
#[derive(Debug, Clone, PartialEq)]
pub struct RecordSpec {
    pub id: &'static str,
    pub params: EcgModelParams,
    pub rate_range_bpm: (f64, f64),
}

/// Three training records sharing the canonical morphology with mild
/// variations, and a fourth whose waves and rhythm differ markedly
/// (inverted T wave, wide QRS, fast rate).
pub fn record_specs() -> [RecordSpec; 4] {
    let base = EcgModelParams::default().with_voltage_scale(6.0);
    let vary = |r_gain: f64, t_gain: f64| {
        let mut p = base.clone();
        p.spikes[2].a *= r_gain;
        p.spikes[4].a *= t_gain;
        p
    };
    let mut unseen = base.clone();
    unseen.spikes[1].b *= 2.5;
    unseen.spikes[2].b *= 2.5;
    unseen.spikes[3].b *= 2.5;
    unseen.spikes[3].a *= 2.0;
    unseen.spikes[4].a = -1.5;
    unseen.spikes[0].a = 0.0;
    [
        RecordSpec { id: "syn-a", params: vary(1.0, 1.0), rate_range_bpm: (60.0, 75.0) },
        RecordSpec { id: "syn-b", params: vary(0.9, 1.3), rate_range_bpm: (65.0, 80.0) },
        RecordSpec { id: "syn-c", params: vary(1.1, 0.8), rate_range_bpm: (55.0, 70.0) },
        RecordSpec { id: "syn-unseen", params: unseen, rate_range_bpm: (100.0, 120.0) },
    ]
}

pub fn generate_record(spec: &RecordSpec, duration_s: f64, seed: u64) -> Result<Signal> {
    generate_varying_record(&spec.params, duration_s, 10.0, spec.rate_range_bpm, FS, seed)
}
