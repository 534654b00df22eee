//! Frequency-domain checks against an independent FFT.

use ecg_lab_core::filters::{algorithm1, Stage};
use ecg_lab_core::noise::{drift_noise, random_noise};
use ecg_lab_core::Signal;
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

/// One-sided power per FFT bin, paired with the bin frequency.
fn power_spectrum(x: &[f64], fs: f64) -> Vec<(f64, f64)> {
    let n = x.len();
    let mut buf: Vec<Complex<f64>> = x.iter().map(|&v| Complex::new(v, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    buf.iter()
        .take(n / 2 + 1)
        .enumerate()
        .map(|(k, c)| (k as f64 * fs / n as f64, c.norm_sqr()))
        .collect()
}

fn fraction_below(spectrum: &[(f64, f64)], hz: f64) -> f64 {
    let total: f64 = spectrum.iter().map(|p| p.1).sum();
    spectrum.iter().filter(|p| p.0 <= hz).map(|p| p.1).sum::<f64>() / total
}

#[test]
fn drift_energy_sits_below_half_a_hertz() {
    for seed in 0..5 {
        let d = drift_noise(360 * 120, 360, seed).unwrap();
        let frac = fraction_below(&power_spectrum(d.samples(), 360.0), 0.55);
        assert!(frac > 0.99, "seed {seed}: {frac}");
    }
}

#[test]
fn white_noise_spectrum_is_flat() {
    let w = random_noise(360 * 100, 360, 1).unwrap();
    let spec = power_spectrum(w.samples(), 360.0);
    let frac = fraction_below(&spec, 90.0);
    assert!((frac - 0.5).abs() < 0.02, "{frac}");
}

#[test]
fn design_magnitude_matches_impulse_response_spectrum() {
    let n = 4096;
    let mut impulse = vec![0.0; n];
    impulse[0] = 1.0;
    for stage in [Stage::Lowpass, Stage::Highpass, Stage::Notch] {
        let f = stage.design(360).unwrap().unwrap();
        let h = f.lfilter(&impulse, &vec![0.0; f.a.len() - 1]);
        let mut buf: Vec<Complex<f64>> = h.iter().map(|&v| Complex::new(v, 0.0)).collect();
        FftPlanner::new().plan_fft_forward(n).process(&mut buf);
        for k in [10, 200, 569, 1000, 1800] {
            let hz = k as f64 * 360.0 / n as f64;
            let fft_mag = buf[k].norm();
            assert!((fft_mag - f.magnitude(hz)).abs() < 1e-3, "{} at {hz} Hz", stage.name());
        }
    }
}

#[test]
fn classical_chain_suppresses_hum_and_drift() {
    let n = 360 * 20;
    let fs = 360.0;
    let x: Vec<f64> = (0..n)
        .map(|i| {
            let t = i as f64 / fs;
            (2.0 * std::f64::consts::PI * 50.0 * t).sin() + (2.0 * std::f64::consts::PI * 0.2 * t).sin()
        })
        .collect();
    let out = algorithm1(&Signal::new(x, 360).unwrap()).unwrap();
    let interior = &out.samples()[360 * 5..n - 360 * 5];
    let residual = interior.iter().map(|v| v * v).sum::<f64>() / interior.len() as f64;
    assert!(residual < 0.01, "residual power {residual}");
}
