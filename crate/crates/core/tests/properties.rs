use ecg_lab_core::datasets::split_indices;
use ecg_lab_core::doe::{select_optimal, DoeRow, SelectionPolicy};
use ecg_lab_core::filters::{design_butterworth, filtfilt, FilterKind};
use ecg_lab_core::metrics::{rms, snr_db};
use ecg_lab_core::noise::{random_noise, scale_noise_to_snr};
use ecg_lab_core::rbm::{for_each_state, RbmParams};
use ecg_lab_core::signal::{concatenate, MinMaxScale};
use ecg_lab_core::wavelet::{dwt, idwt, wavelet_denoise, Family, WaveletSpec};
use ecg_lab_core::Signal;
use proptest::prelude::*;

fn signal(len: std::ops::Range<usize>) -> impl Strategy<Value = Signal> {
    prop::collection::vec(-5.0..5.0f64, len).prop_map(|v| Signal::new(v, 360).unwrap())
}

fn family() -> impl Strategy<Value = Family> {
    prop_oneof![Just(Family::Haar), Just(Family::Db4), Just(Family::Sym4)]
}

fn row(sim_id: u32) -> impl Strategy<Value = DoeRow> {
    (0.05..0.3f64, 5.0..15.0f64, 100.0..12000.0f64).prop_map(move |(rms, snr, t)| DoeRow {
        sim_id,
        filters: 16,
        kernel: "9x1".into(),
        kernel_len: 9,
        avg_rms_mv: rms,
        avg_snr_db: snr,
        wall_time_s: t,
    })
}

fn rows() -> impl Strategy<Value = Vec<DoeRow>> {
    (1usize..30).prop_flat_map(|n| (1..=n as u32).map(row).collect::<Vec<_>>())
}

proptest! {
    #[test]
    fn segmenting_then_concatenating_restores_whole_windows(s in signal(360..2000)) {
        let windows = s.segment(1.0).unwrap();
        let joined = concatenate(&windows).unwrap();
        let kept = windows.len() * 360;
        prop_assert_eq!(joined.samples(), &s.samples()[..kept]);
    }

    #[test]
    fn power_scales_quadratically(s in signal(1..200), k in -10.0..10.0f64) {
        let scaled = s.scaled(k).power();
        prop_assert!((scaled - k * k * s.power()).abs() <= 1e-9 * (1.0 + scaled));
    }

    #[test]
    fn minmax_scale_inverts(s in signal(2..200)) {
        prop_assume!(s.peak_to_peak() > 1e-6);
        let (scaled, scale) = s.minmax_scale(0.0, 1.0).unwrap();
        let (lo, hi) = scaled.min_max();
        prop_assert!(lo.abs() < 1e-12 && (hi - 1.0).abs() < 1e-12);
        let back = scale.invert(&scaled);
        for (a, b) in back.samples().iter().zip(s.samples()) {
            prop_assert!((a - b).abs() < 1e-9);
        }
        prop_assert!(MinMaxScale::fit(&Signal::new(vec![2.0; 5], 360).unwrap(), 0.0, 1.0).is_err());
    }

    #[test]
    fn calibrated_noise_measures_back_exactly(s in signal(16..400), seed in any::<u64>(), target in -10.0..40.0f64) {
        prop_assume!(s.power() > 1e-6);
        let noise = random_noise(s.len(), 360, seed).unwrap();
        let noisy = scale_noise_to_snr(&s, &noise, target).unwrap();
        prop_assert!((snr_db(&s, &noisy).unwrap() - target).abs() < 1e-9);
    }

    #[test]
    fn rms_is_symmetric_and_non_negative(a in signal(50..51), b in signal(50..51)) {
        let ab = rms(&a, &b).unwrap();
        prop_assert!(ab >= 0.0);
        prop_assert!((ab - rms(&b, &a).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn filtfilt_is_linear(x in signal(100..300), y in signal(100..300), k in -3.0..3.0f64) {
        let n = x.len().min(y.len());
        let x = Signal::new(x.samples()[..n].to_vec(), 360).unwrap();
        let y = Signal::new(y.samples()[..n].to_vec(), 360).unwrap();
        let f = design_butterworth(FilterKind::Lowpass, &[30.0], 1, 360).unwrap();
        let combined = filtfilt(&f, &x.scaled(k).add(&y).unwrap()).unwrap();
        let separate = filtfilt(&f, &x).unwrap().scaled(k).add(&filtfilt(&f, &y).unwrap()).unwrap();
        for (a, b) in combined.samples().iter().zip(separate.samples()) {
            prop_assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn wavelet_round_trip(fam in family(), s in signal(8..600), levels in 1usize..5) {
        let spec = WaveletSpec::new(fam);
        prop_assume!(levels <= spec.max_level(s.len()));
        let back = idwt(&dwt(&s, &spec, levels).unwrap(), &spec).unwrap();
        prop_assert_eq!(back.len(), s.len());
        for (a, b) in back.samples().iter().zip(s.samples()) {
            prop_assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn wavelet_denoise_is_scale_covariant(fam in family(), s in signal(64..400), k in 0.1..10.0f64) {
        let spec = WaveletSpec::new(fam);
        let levels = spec.default_levels(s.len());
        let a = wavelet_denoise(&s.scaled(k), &spec, levels).unwrap();
        let b = wavelet_denoise(&s, &spec, levels).unwrap().scaled(k);
        for (x, y) in a.samples().iter().zip(b.samples()) {
            prop_assert!((x - y).abs() < 1e-9 * k.max(1.0));
        }
    }

    #[test]
    fn selection_ignores_row_order(mut rows in rows(), seed in any::<u64>()) {
        let policy = SelectionPolicy::default();
        let before = select_optimal(&rows, &policy);
        let mut rng = ecg_lab_core::rng::SplitMix64::new(seed);
        rng.shuffle(&mut rows);
        prop_assert_eq!(before, select_optimal(&rows, &policy));
    }

    #[test]
    fn a_dominated_row_never_changes_the_best(rows in rows()) {
        let policy = SelectionPolicy::default();
        if let Ok(sel) = select_optimal(&rows, &policy) {
            let mut more = rows.clone();
            more.push(DoeRow {
                sim_id: rows.len() as u32 + 1,
                avg_rms_mv: sel.best.avg_rms_mv + 0.01,
                avg_snr_db: sel.best.avg_snr_db - 1.0,
                wall_time_s: sel.best.wall_time_s + 1.0,
                ..sel.best.clone()
            });
            prop_assert_eq!(select_optimal(&more, &policy).unwrap().best, sel.best);
        }
    }

    #[test]
    fn lowering_a_shortlisted_rms_keeps_or_takes_the_lead(rows in rows(), pick in any::<prop::sample::Index>()) {
        let policy = SelectionPolicy::default();
        if let Ok(sel) = select_optimal(&rows, &policy) {
            let chosen = pick.get(&sel.shortlist).clone();
            let mut better = rows.clone();
            let target = better.iter_mut().find(|r| r.sim_id == chosen.sim_id).unwrap();
            target.avg_rms_mv = sel.best.avg_rms_mv - 0.001;
            prop_assert_eq!(select_optimal(&better, &policy).unwrap().best.sim_id, chosen.sim_id);
        }
    }

    #[test]
    fn split_is_a_deterministic_three_to_one_partition(n in 0usize..500, seed in any::<u64>()) {
        let (train, test) = split_indices(n, seed);
        prop_assert_eq!((train.clone(), test.clone()), split_indices(n, seed));
        prop_assert_eq!(test.len(), n / 4);
        let mut all: Vec<usize> = train.iter().chain(&test).copied().collect();
        all.sort_unstable();
        prop_assert_eq!(all, (0..n).collect::<Vec<_>>());
    }

    #[test]
    fn rbm_distribution_is_normalised(seed in any::<u64>(), scale in 0.0..200.0f64) {
        let mut p = RbmParams::random(3, 2, seed);
        p.w.iter_mut().for_each(|w| *w *= scale);
        let mut total = 0.0;
        for_each_state(3, 2, |v, h| total += p.joint_probability(v, h).unwrap());
        prop_assert!((total - 1.0).abs() < 1e-12);
    }
}
