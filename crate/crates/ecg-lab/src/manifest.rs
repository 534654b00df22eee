//! Run manifests: the full config plus SHA-256 of every input and output.
//!
//! A manifest is itself a valid config with three extra sections
//! (`[versions]`, `[input-hashes]`, `[output-hashes]`), so replaying it is
//! running it and comparing hashes.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::config::ExperimentConfig;
use crate::error::{LabError, Result};
use crate::formats::write_file;

const VERSIONS: &str = "versions";
const INPUT_HASHES: &str = "input-hashes";
const OUTPUT_HASHES: &str = "output-hashes";

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn hash_file(path: &Path) -> Result<String> {
    let bytes = fs::read(path).map_err(LabError::io(path))?;
    Ok(sha256_hex(&bytes))
}

/// `<outputs.dir>/manifest.txt` for directory recipes, `<outputs.output>.manifest` otherwise.
pub fn manifest_path(config: &ExperimentConfig) -> Result<PathBuf> {
    if let Some(dir) = config.get("outputs", "dir") {
        return Ok(Path::new(dir).join("manifest.txt"));
    }
    let out = config.output("output")?;
    let mut name = out.into_os_string();
    name.push(".manifest");
    Ok(PathBuf::from(name))
}

fn input_paths(config: &ExperimentConfig) -> Vec<String> {
    let mut paths: Vec<String> = config
        .inputs()
        .flat_map(|(_, v)| v.split(',').map(|p| p.trim().to_string()).collect::<Vec<_>>())
        .filter(|p| Path::new(p).is_file())
        .collect();
    paths.sort();
    paths.dedup();
    paths
}

pub fn render_manifest(config: &ExperimentConfig, outputs: &[PathBuf]) -> Result<String> {
    let mut text = config.to_text();
    let _ = write!(text, "\n[{VERSIONS}]\necg-lab = {}\n", env!("CARGO_PKG_VERSION"));
    let _ = write!(text, "\n[{INPUT_HASHES}]\n");
    for p in input_paths(config) {
        let _ = writeln!(text, "{p} = {}", hash_file(Path::new(&p))?);
    }
    let _ = write!(text, "\n[{OUTPUT_HASHES}]\n");
    let mut outs: Vec<String> = outputs.iter().map(|p| p.display().to_string()).collect();
    outs.sort();
    outs.dedup();
    for p in outs {
        let _ = writeln!(text, "{p} = {}", hash_file(Path::new(&p))?);
    }
    Ok(text)
}

pub fn write_manifest(config: &ExperimentConfig, outputs: &[PathBuf]) -> Result<PathBuf> {
    let path = manifest_path(config)?;
    write_file(&path, render_manifest(config, outputs)?.as_bytes())?;
    Ok(path)
}

/// A manifest split into the config it records and its hash tables.
pub struct Manifest {
    pub config: ExperimentConfig,
    pub inputs: BTreeMap<String, String>,
    pub outputs: BTreeMap<String, String>,
}

impl Manifest {
    pub fn load(path: &Path) -> Result<Self> {
        let mut config = ExperimentConfig::load(path)?;
        config.remove_section(VERSIONS);
        let inputs = config.remove_section(INPUT_HASHES).unwrap_or_default();
        let outputs = config.remove_section(OUTPUT_HASHES).unwrap_or_default();
        Ok(Self {
            config,
            inputs,
            outputs,
        })
    }

    pub fn check_inputs(&self) -> Result<()> {
        check(&self.inputs)
    }

    pub fn check_outputs(&self) -> Result<()> {
        check(&self.outputs)
    }
}

fn check(expected: &BTreeMap<String, String>) -> Result<()> {
    for (path, hash) in expected {
        let actual = hash_file(Path::new(path))?;
        if &actual != hash {
            return Err(LabError::ReplayMismatch {
                path: path.clone(),
                expected: hash.clone(),
                actual,
            });
        }
    }
    Ok(())
}
