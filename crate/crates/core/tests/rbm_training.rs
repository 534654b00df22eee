use ecg_lab_core::rbm::{for_each_state, train_cd1, RbmConfig, RbmParams};
use ecg_lab_core::synth::{generate_varying_record, EcgModelParams};

#[test]
fn joint_distribution_sums_to_one() {
    for seed in 0..5 {
        let mut p = RbmParams::random(3, 2, seed);
        // Larger weights than the initialiser gives make the check meaningful.
        p.w.iter_mut().for_each(|w| *w *= 100.0);
        p.a = vec![0.3, -0.7, 1.1];
        p.b = vec![-0.2, 0.5];
        let mut total = 0.0;
        for_each_state(3, 2, |v, h| total += p.joint_probability(v, h).unwrap());
        assert!((total - 1.0).abs() < 1e-12, "sum {total}");
    }
}

#[test]
fn transposing_swaps_roles_but_keeps_the_partition_function() {
    let mut p = RbmParams::random(3, 2, 9);
    p.w.iter_mut().for_each(|w| *w *= 50.0);
    p.a = vec![0.1, 0.2, -0.4];
    p.b = vec![0.9, -1.3];
    let t = p.transposed();
    let (z, zt) = (p.partition_function().unwrap(), t.partition_function().unwrap());
    assert!((z - zt).abs() < 1e-12 * z);
    for_each_state(3, 2, |v, h| {
        let e = p.energy(v, h).unwrap();
        let et = t.energy(h, v).unwrap();
        assert!((e - et).abs() < 1e-12);
    });
}

#[test]
fn cd1_reconstruction_error_falls_over_twenty_epochs() {
    let record = generate_varying_record(
        &EcgModelParams::default().with_voltage_scale(6.0),
        50.0,
        10.0,
        (60.0, 90.0),
        360,
        2,
    )
    .unwrap();
    let windows: Vec<Vec<f64>> = record
        .segment(1.0)
        .unwrap()
        .into_iter()
        .map(|w| w.minmax_scale(0.0, 1.0).unwrap().0.into_samples())
        .collect();
    assert_eq!(windows.len(), 50);
    let config = RbmConfig { n_hidden: 32, seed: 4, ..RbmConfig::default() };
    let (_, trace) = train_cd1(&windows, &config).unwrap();
    assert_eq!(trace.epoch_recon_error.len(), 20);
    assert!(trace.epoch_recon_error[19] < trace.epoch_recon_error[0], "{:?}", trace.epoch_recon_error);
}
