//! Dataset sizes for the full-size scenarios. Sample rates are kept low
//! where the counts do not depend on them, so the builds stay cheap.

use ecg_lab_core::datasets::{build_effort_dataset, build_multi_record, build_single_record, DatasetSpec, Split};
use ecg_lab_core::noise::NoiseKind;
use ecg_lab_core::synth::{single_beat, EcgModelParams};
use ecg_lab_core::Signal;

const FOUR: [f64; 4] = [-6.0, 0.0, 6.0, 12.0];
const FOURTEEN: [f64; 14] = [36.0, 24.0, 20.0, 18.0, 14.0, 12.0, 8.0, 6.0, 3.0, 0.0, -1.0, -3.0, -6.0, -8.0];

fn record(seconds: usize, fs: u32, phase: f64) -> Signal {
    let n = seconds * fs as usize;
    Signal::new((0..n).map(|i| (i as f64 * 0.9 + phase).sin() + 0.1).collect(), fs).unwrap()
}

fn counts(spec_windows: usize, levels: &[f64], draws: usize, build: impl Fn(&DatasetSpec) -> ecg_lab_core::datasets::PairedDataset) -> (usize, usize, usize) {
    let spec = DatasetSpec {
        noise_draws: draws,
        ..DatasetSpec::new(spec_windows, levels, NoiseKind::Random, 5)
    };
    let ds = build(&spec);
    (ds.len(), ds.indices(Split::Train).len(), ds.indices(Split::Test).len())
}

#[test]
fn single_record_four_levels() {
    let r = record(720, 360, 0.0);
    let got = counts(720, &FOUR, 1, |s| build_single_record("118", &r, s).unwrap());
    assert_eq!(got, (2880, 2160, 720));
}

#[test]
fn single_record_eleven_levels() {
    let r = record(720, 8, 0.0);
    let levels: Vec<f64> = (0..11).map(|i| -8.0 + 4.0 * i as f64).collect();
    let got = counts(720, &levels, 1, |s| build_single_record("118", &r, s).unwrap());
    assert_eq!(got.0, 7920);
}

#[test]
fn ten_records_fourteen_levels() {
    let records: Vec<(String, Signal)> =
        (0..10).map(|i| (format!("rec{i}"), record(720, 4, i as f64))).collect();
    let got = counts(720, &FOURTEEN, 1, |s| build_multi_record(&records, s).unwrap());
    assert_eq!(got, (100800, 75600, 25200));
}

#[test]
fn effort_family_sizes() {
    let beat = single_beat(&EcgModelParams::default().with_voltage_scale(6.0), 360).unwrap();
    let rates = [72.0, 78.0, 84.0, 90.0];
    let build = |s: &DatasetSpec| build_effort_dataset(&beat, &rates, s).unwrap();
    assert_eq!(counts(50, &FOUR, 1, build), (800, 600, 200));
    assert_eq!(counts(891, &FOUR, 1, build), (14256, 10692, 3564));
    assert_eq!(counts(891, &FOUR, 3, build), (42768, 32076, 10692));
}

#[test]
fn every_noisy_item_matches_its_recorded_level() {
    let r = record(30, 360, 0.3);
    let spec = DatasetSpec::new(30, &FOURTEEN, NoiseKind::RandomPlusDrift, 8);
    let ds = build_single_record("r", &r, &spec).unwrap();
    for i in 0..ds.len() {
        let measured = ecg_lab_core::metrics::snr_db(&ds.clean[i], &ds.noisy[i]).unwrap();
        assert!((measured - ds.meta[i].snr_db).abs() < 1e-9);
    }
}
