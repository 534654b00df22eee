//! On-disk formats: signals (text or `ECG1` binary) and trained models
//! (`CNN1`, `RBM1`). All binary fields are little-endian.
//!
//! `CNN1` layout: magic, then u64 input_len, num_conv_layers,
//! filters_per_layer, kernel_len, pool_stride, pool_mode (0 subsample,
//! 1 mean), batch_size, epochs, seed; f64 learning_rate, grad_clip_norm;
//! then f64 blocks: per conv block kernel, γ, β, running mean, running
//! variance; dense weight, dense bias; input mean.
//!
//! `RBM1` layout: magic, u64 n_visible, n_hidden, then f64 blocks w, a, b.

use std::fs;
use std::path::Path;

use ecg_lab_core::neural::{CnnConfig, CnnModel, PoolMode};
use ecg_lab_core::rbm::RbmParams;
use ecg_lab_core::Signal;

use crate::error::{LabError, Result};

const SIGNAL_MAGIC: &[u8; 4] = b"ECG1";
const CNN_MAGIC: &[u8; 4] = b"CNN1";
const RBM_MAGIC: &[u8; 4] = b"RBM1";

/// Reads a signal, choosing the format from the file's first bytes.
pub fn read_signal(path: &Path) -> Result<Signal> {
    let bytes = fs::read(path).map_err(LabError::io(path))?;
    if bytes.starts_with(SIGNAL_MAGIC) {
        decode_signal_binary(&bytes).map_err(|m| LabError::format(path, m))
    } else {
        let text = String::from_utf8(bytes).map_err(|_| LabError::format(path, "not UTF-8 text"))?;
        parse_signal_text(&text).map_err(|m| LabError::format(path, m))
    }
}

/// Writes binary when the extension is `.bin`, text otherwise.
pub fn write_signal(path: &Path, signal: &Signal) -> Result<()> {
    let bytes = if path.extension().is_some_and(|e| e == "bin") {
        encode_signal_binary(signal)
    } else {
        format_signal_text(signal).into_bytes()
    };
    write_file(path, &bytes)
}

pub(crate) fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(LabError::io(dir))?;
    }
    fs::write(path, bytes).map_err(LabError::io(path))
}

/// `fs=<rate>` on the first line, then one sample per line.
pub fn format_signal_text(signal: &Signal) -> String {
    let mut out = format!("fs={}\n", signal.fs());
    for v in signal.samples() {
        out.push_str(&format!("{v}\n"));
    }
    out
}

pub fn parse_signal_text(text: &str) -> std::result::Result<Signal, String> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines.next().ok_or("empty signal file")?;
    let fs = header
        .strip_prefix("fs=")
        .and_then(|v| v.trim().parse::<u32>().ok())
        .ok_or_else(|| format!("expected `fs=<rate>` header, found `{header}`"))?;
    let samples = lines
        .enumerate()
        .map(|(i, l)| {
            l.parse::<f64>()
                .map_err(|_| format!("sample {}: `{l}` is not a number", i + 1))
        })
        .collect::<std::result::Result<Vec<_>, _>>()?;
    Signal::new(samples, fs).map_err(|e| e.to_string())
}

pub fn encode_signal_binary(signal: &Signal) -> Vec<u8> {
    let mut w = Writer::new(SIGNAL_MAGIC);
    w.u32(signal.fs());
    w.f64s(signal.samples());
    w.0
}

pub fn decode_signal_binary(bytes: &[u8]) -> std::result::Result<Signal, String> {
    let mut r = Reader::new(bytes, SIGNAL_MAGIC)?;
    let fs = r.u32()?;
    let rest = r.remaining();
    if rest % 8 != 0 {
        return Err("trailing bytes after the last sample".into());
    }
    let samples = r.f64s(rest / 8)?;
    Signal::new(samples, fs).map_err(|e| e.to_string())
}

pub fn encode_cnn(model: &CnnModel) -> Vec<u8> {
    let c = &model.config;
    let mut w = Writer::new(CNN_MAGIC);
    for v in [
        c.input_len,
        c.num_conv_layers,
        c.filters_per_layer,
        c.kernel_len,
        c.pool_stride,
        match c.pool_mode {
            PoolMode::Subsample => 0,
            PoolMode::Mean => 1,
        },
        c.batch_size,
        c.epochs,
    ] {
        w.u64(v as u64);
    }
    w.u64(c.seed);
    w.f64(c.learning_rate);
    w.f64(c.grad_clip_norm);
    for b in &model.blocks {
        w.f64s(&b.conv.weight);
        w.f64s(&b.bn.gamma);
        w.f64s(&b.bn.beta);
        w.f64s(&b.bn.running_mean);
        w.f64s(&b.bn.running_var);
    }
    w.f64s(&model.fc.weight);
    w.f64s(&model.fc.bias);
    w.f64s(&model.input_mean);
    w.0
}

pub fn decode_cnn(bytes: &[u8]) -> std::result::Result<CnnModel, String> {
    let mut r = Reader::new(bytes, CNN_MAGIC)?;
    let mut next = || r.u64().map(|v| v as usize);
    let input_len = next()?;
    let num_conv_layers = next()?;
    let filters_per_layer = next()?;
    let kernel_len = next()?;
    let pool_stride = next()?;
    let pool_mode = match next()? {
        0 => PoolMode::Subsample,
        1 => PoolMode::Mean,
        m => return Err(format!("unknown pool mode {m}")),
    };
    let batch_size = next()?;
    let epochs = next()?;
    let config = CnnConfig {
        input_len,
        num_conv_layers,
        filters_per_layer,
        kernel_len,
        pool_stride,
        pool_mode,
        batch_size,
        epochs,
        seed: r.u64()?,
        learning_rate: r.f64()?,
        grad_clip_norm: r.f64()?,
    };
    let mut model = CnnModel::init(config).map_err(|e| e.to_string())?;
    for b in &mut model.blocks {
        r.fill(&mut b.conv.weight)?;
        r.fill(&mut b.bn.gamma)?;
        r.fill(&mut b.bn.beta)?;
        r.fill(&mut b.bn.running_mean)?;
        r.fill(&mut b.bn.running_var)?;
    }
    r.fill(&mut model.fc.weight)?;
    r.fill(&mut model.fc.bias)?;
    r.fill(&mut model.input_mean)?;
    r.finish()?;
    Ok(model)
}

pub fn encode_rbm(p: &RbmParams) -> Vec<u8> {
    let mut w = Writer::new(RBM_MAGIC);
    w.u64(p.n_visible as u64);
    w.u64(p.n_hidden as u64);
    w.f64s(&p.w);
    w.f64s(&p.a);
    w.f64s(&p.b);
    w.0
}

pub fn decode_rbm(bytes: &[u8]) -> std::result::Result<RbmParams, String> {
    let mut r = Reader::new(bytes, RBM_MAGIC)?;
    let n_visible = r.u64()? as usize;
    let n_hidden = r.u64()? as usize;
    let count = n_visible
        .checked_mul(n_hidden)
        .ok_or("RBM dimensions overflow")?;
    let p = RbmParams {
        n_visible,
        n_hidden,
        w: r.f64s(count)?,
        a: r.f64s(n_visible)?,
        b: r.f64s(n_hidden)?,
    };
    r.finish()?;
    p.validate().map_err(|e| e.to_string())?;
    Ok(p)
}

pub fn read_cnn(path: &Path) -> Result<CnnModel> {
    let bytes = fs::read(path).map_err(LabError::io(path))?;
    decode_cnn(&bytes).map_err(|m| LabError::format(path, m))
}

pub fn read_rbm(path: &Path) -> Result<RbmParams> {
    let bytes = fs::read(path).map_err(LabError::io(path))?;
    decode_rbm(&bytes).map_err(|m| LabError::format(path, m))
}

struct Writer(Vec<u8>);

impl Writer {
    fn new(magic: &[u8; 4]) -> Self {
        Self(magic.to_vec())
    }

    fn u32(&mut self, v: u32) {
        self.0.extend_from_slice(&v.to_le_bytes());
    }

    fn u64(&mut self, v: u64) {
        self.0.extend_from_slice(&v.to_le_bytes());
    }

    fn f64(&mut self, v: f64) {
        self.0.extend_from_slice(&v.to_le_bytes());
    }

    fn f64s(&mut self, vs: &[f64]) {
        vs.iter().for_each(|&v| self.f64(v));
    }
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn new(bytes: &'a [u8], magic: &[u8; 4]) -> std::result::Result<Self, String> {
        if !bytes.starts_with(magic) {
            return Err(format!(
                "missing `{}` header",
                String::from_utf8_lossy(magic)
            ));
        }
        Ok(Self { bytes, pos: 4 })
    }

    fn take<const N: usize>(&mut self) -> std::result::Result<[u8; N], String> {
        let end = self.pos + N;
        let chunk = self
            .bytes
            .get(self.pos..end)
            .ok_or_else(|| format!("file truncated at byte {}", self.pos))?;
        self.pos = end;
        Ok(chunk.try_into().expect("slice has length N"))
    }

    fn u32(&mut self) -> std::result::Result<u32, String> {
        self.take().map(u32::from_le_bytes)
    }

    fn u64(&mut self) -> std::result::Result<u64, String> {
        self.take().map(u64::from_le_bytes)
    }

    fn f64(&mut self) -> std::result::Result<f64, String> {
        self.take().map(f64::from_le_bytes)
    }

    fn f64s(&mut self, n: usize) -> std::result::Result<Vec<f64>, String> {
        if n > self.remaining() / 8 {
            return Err(format!("file truncated: {n} values expected"));
        }
        (0..n).map(|_| self.f64()).collect()
    }

    fn fill(&mut self, out: &mut [f64]) -> std::result::Result<(), String> {
        for v in out {
            *v = self.f64()?;
        }
        Ok(())
    }

    fn remaining(&self) -> usize {
        self.bytes.len() - self.pos
    }

    fn finish(&self) -> std::result::Result<(), String> {
        match self.remaining() {
            0 => Ok(()),
            n => Err(format!("{n} unexpected trailing bytes")),
        }
    }
}
