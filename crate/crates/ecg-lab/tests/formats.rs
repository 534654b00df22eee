use ecg_lab::formats::{
    decode_cnn, decode_rbm, decode_signal_binary, encode_cnn, encode_rbm, encode_signal_binary, format_signal_text,
    parse_signal_text, read_signal, write_signal,
};
use ecg_lab_core::neural::{CnnConfig, CnnModel, PoolMode};
use ecg_lab_core::rbm::RbmParams;
use ecg_lab_core::Signal;

fn wave() -> Signal {
    Signal::new((0..50).map(|i| (i as f64 * 0.3).sin() * 1e-3 + 1.0 / 3.0).collect(), 360).unwrap()
}

#[test]
fn text_and_binary_signals_round_trip_exactly() {
    let s = wave();
    assert_eq!(parse_signal_text(&format_signal_text(&s)).unwrap(), s);
    assert_eq!(decode_signal_binary(&encode_signal_binary(&s)).unwrap(), s);
}

#[test]
fn files_pick_their_encoding_from_the_extension() {
    let dir = tempfile::tempdir().unwrap();
    let s = wave();
    for name in ["a.txt", "b.bin", "nested/c.csv"] {
        let p = dir.path().join(name);
        write_signal(&p, &s).unwrap();
        assert_eq!(read_signal(&p).unwrap(), s);
    }
    let bin = std::fs::read(dir.path().join("b.bin")).unwrap();
    assert_eq!(&bin[..4], b"ECG1");
}

#[test]
fn text_accepts_comments_and_rejects_garbage() {
    let s = parse_signal_text("# exported\nfs=250\n1.5\n\n-2\n").unwrap();
    assert_eq!((s.fs(), s.samples()), (250, &[1.5, -2.0][..]));
    assert!(parse_signal_text("1.0\n2.0\n").is_err());
    assert!(parse_signal_text("fs=360\nabc\n").is_err());
    assert!(decode_signal_binary(b"ECG1\x68\x01").is_err());
}

#[test]
fn trained_models_round_trip() {
    let config = CnnConfig {
        input_len: 12,
        num_conv_layers: 2,
        filters_per_layer: 3,
        kernel_len: 3,
        pool_mode: PoolMode::Mean,
        epochs: 2,
        batch_size: 2,
        seed: 6,
        ..CnnConfig::default()
    };
    let rows: Vec<Vec<f64>> = (0..4).map(|k| (0..12).map(|i| ((i + k) as f64).sin()).collect()).collect();
    let (model, _) = CnnModel::train(config, &rows, &rows).unwrap();
    let bytes = encode_cnn(&model);
    assert_eq!(decode_cnn(&bytes).unwrap(), model);
    assert!(decode_cnn(&bytes[..bytes.len() - 3]).is_err());

    let rbm = RbmParams::random(5, 3, 2);
    assert_eq!(decode_rbm(&encode_rbm(&rbm)).unwrap(), rbm);
    assert!(decode_rbm(b"CNN1").is_err());
}
