//! Datasets on disk: an `index.csv` plus one binary signal file per window.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use ecg_lab_core::datasets::{PairMeta, PairedDataset};

use crate::error::{LabError, Result};
use crate::formats::{read_signal, write_file, write_signal};

pub const INDEX_HEADER: &str = "clean_path,noisy_path,record_id,window,snr_db,beat_rate,split";

/// Writes the dataset under `dir` and returns every file written.
pub fn write_dataset(dir: &Path, ds: &PairedDataset) -> Result<Vec<PathBuf>> {
    let mut written = Vec::with_capacity(2 * ds.len() + 1);
    let mut index = format!("{INDEX_HEADER}\n");
    let mut split = vec!["train"; ds.len()];
    for &i in &ds.test {
        split[i] = "test";
    }
    for (i, (m, role)) in ds.meta.iter().zip(&split).enumerate() {
        let clean = format!("pairs/{i:05}_clean.bin");
        let noisy = format!("pairs/{i:05}_noisy.bin");
        write_signal(&dir.join(&clean), &ds.clean[i])?;
        write_signal(&dir.join(&noisy), &ds.noisy[i])?;
        written.push(dir.join(&clean));
        written.push(dir.join(&noisy));
        let rate = m.beat_rate_bpm.map(|r| r.to_string()).unwrap_or_default();
        let _ = writeln!(
            index,
            "{clean},{noisy},{},{},{},{rate},{}",
            m.record_id, m.window, m.snr_db, role
        );
    }
    let index_path = dir.join("index.csv");
    write_file(&index_path, index.as_bytes())?;
    written.push(index_path);
    Ok(written)
}

pub fn read_dataset(dir: &Path, seed: u64) -> Result<PairedDataset> {
    let index_path = dir.join("index.csv");
    let text = fs::read_to_string(&index_path).map_err(LabError::io(&index_path))?;
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    if lines.next().map(str::trim) != Some(INDEX_HEADER) {
        return Err(LabError::format(&index_path, format!("expected header `{INDEX_HEADER}`")));
    }
    let (mut clean, mut noisy, mut meta) = (Vec::new(), Vec::new(), Vec::new());
    let (mut train, mut test) = (Vec::new(), Vec::new());
    for (i, line) in lines.enumerate() {
        let bad = |what: &str| LabError::format(&index_path, format!("row {}: bad {what}", i + 1));
        let f: Vec<&str> = line.split(',').map(str::trim).collect();
        if f.len() != 7 {
            return Err(bad("column count"));
        }
        clean.push(read_signal(&dir.join(f[0]))?);
        noisy.push(read_signal(&dir.join(f[1]))?);
        meta.push(PairMeta {
            record_id: f[2].to_string(),
            window: f[3].parse().map_err(|_| bad("window"))?,
            snr_db: f[4].parse().map_err(|_| bad("snr_db"))?,
            beat_rate_bpm: match f[5] {
                "" => None,
                r => Some(r.parse().map_err(|_| bad("beat_rate"))?),
            },
        });
        match f[6] {
            "train" => train.push(i),
            "test" => test.push(i),
            _ => return Err(bad("split")),
        }
    }
    Ok(PairedDataset::with_split(clean, noisy, meta, train, test, seed)?)
}
