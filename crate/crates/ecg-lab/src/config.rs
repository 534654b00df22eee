//! Flat `key = value` experiment configs with `[section]` headers.
//!
//! Top-level keys come before the first header; `recipe` and `seed` are
//! mandatory. `[inputs]` lists files that must exist, `[outputs]` the files
//! or directories a recipe writes. Other sections carry module parameters.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{LabError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Recipe {
    Synth,
    AddNoise,
    Filter,
    WaveletDenoise,
    BuildDataset,
    Train,
    Denoise,
    RbmTrain,
    RbmDenoise,
    Eval,
    Doe,
    Reproduce41,
    Reproduce45,
    Plot,
}

impl Recipe {
    pub const ALL: [Recipe; 14] = [
        Recipe::Synth,
        Recipe::AddNoise,
        Recipe::Filter,
        Recipe::WaveletDenoise,
        Recipe::BuildDataset,
        Recipe::Train,
        Recipe::Denoise,
        Recipe::RbmTrain,
        Recipe::RbmDenoise,
        Recipe::Eval,
        Recipe::Doe,
        Recipe::Reproduce41,
        Recipe::Reproduce45,
        Recipe::Plot,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Recipe::Synth => "synth",
            Recipe::AddNoise => "add-noise",
            Recipe::Filter => "filter",
            Recipe::WaveletDenoise => "wavelet-denoise",
            Recipe::BuildDataset => "build-dataset",
            Recipe::Train => "train",
            Recipe::Denoise => "denoise",
            Recipe::RbmTrain => "rbm-train",
            Recipe::RbmDenoise => "rbm-denoise",
            Recipe::Eval => "eval",
            Recipe::Doe => "doe",
            Recipe::Reproduce41 => "reproduce-4.1",
            Recipe::Reproduce45 => "reproduce-4.5",
            Recipe::Plot => "plot",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|r| r.name() == name)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub recipe: Recipe,
    pub seed: u64,
    sections: BTreeMap<String, BTreeMap<String, String>>,
}

impl ExperimentConfig {
    pub fn new(recipe: Recipe, seed: u64) -> Self {
        Self {
            recipe,
            seed,
            sections: BTreeMap::new(),
        }
    }

    /// Builder-style setter.
    pub fn with(mut self, section: &str, key: &str, value: impl ToString) -> Self {
        self.set(section, key, value);
        self
    }

    pub fn set(&mut self, section: &str, key: &str, value: impl ToString) {
        self.sections
            .entry(section.to_string())
            .or_default()
            .insert(key.to_string(), value.to_string());
    }

    pub fn get(&self, section: &str, key: &str) -> Option<&str> {
        self.sections.get(section)?.get(key).map(String::as_str)
    }

    pub fn section(&self, section: &str) -> impl Iterator<Item = (&str, &str)> {
        self.sections
            .get(section)
            .into_iter()
            .flatten()
            .map(|(k, v)| (k.as_str(), v.as_str()))
    }

    pub fn require(&self, section: &str, key: &str) -> Result<&str> {
        self.get(section, key)
            .ok_or_else(|| LabError::config(format!("missing `{key}` in [{section}]")))
    }

    /// Parsed value, or `default` when the key is absent.
    pub fn parse_or<T: FromStr>(&self, section: &str, key: &str, default: T) -> Result<T> {
        match self.get(section, key) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|_| LabError::config(format!("[{section}] {key} = `{v}` is not valid"))),
        }
    }

    /// Comma-separated list, or `default` when absent.
    pub fn list_or<T: FromStr + Clone>(&self, section: &str, key: &str, default: &[T]) -> Result<Vec<T>> {
        match self.get(section, key) {
            None => Ok(default.to_vec()),
            Some(v) => v
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(|s| {
                    s.parse()
                        .map_err(|_| LabError::config(format!("[{section}] {key}: `{s}` is not valid")))
                })
                .collect(),
        }
    }

    pub fn input(&self, key: &str) -> Result<PathBuf> {
        self.require("inputs", key).map(PathBuf::from)
    }

    pub fn output(&self, key: &str) -> Result<PathBuf> {
        self.require("outputs", key).map(PathBuf::from)
    }

    pub fn inputs(&self) -> impl Iterator<Item = (&str, &str)> {
        self.section("inputs")
    }

    /// Checks that every declared input exists.
    pub fn validate(&self) -> Result<()> {
        for (key, path) in self.inputs() {
            for p in path.split(',').map(str::trim) {
                if !Path::new(p).exists() {
                    return Err(LabError::config(format!("input `{key}` does not exist: {p}")));
                }
            }
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut recipe = None;
        let mut seed = None;
        let mut sections: BTreeMap<String, BTreeMap<String, String>> = BTreeMap::new();
        let mut current: Option<String> = None;
        for (no, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                current = Some(name.trim().to_string());
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| LabError::config(format!("line {}: expected `key = value`", no + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            match current.as_deref() {
                None if key == "recipe" => {
                    recipe = Some(
                        Recipe::from_name(value)
                            .ok_or_else(|| LabError::config(format!("unknown recipe `{value}`")))?,
                    )
                }
                None if key == "seed" => {
                    seed = Some(
                        value
                            .parse()
                            .map_err(|_| LabError::config(format!("seed `{value}` is not an integer")))?,
                    )
                }
                None => return Err(LabError::config(format!("unknown top-level key `{key}`"))),
                Some(section) => {
                    sections
                        .entry(section.to_string())
                        .or_default()
                        .insert(key.to_string(), value.to_string());
                }
            }
        }
        Ok(Self {
            recipe: recipe.ok_or_else(|| LabError::config("missing `recipe`"))?,
            seed: seed.ok_or_else(|| LabError::config("missing `seed`"))?,
            sections,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(LabError::io(path))?;
        Self::parse(&text)
    }

    /// Canonical text: top-level keys, then sections and keys in sorted order.
    pub fn to_text(&self) -> String {
        let mut out = format!("recipe = {}\nseed = {}\n", self.recipe.name(), self.seed);
        for (name, entries) in &self.sections {
            let _ = write!(out, "\n[{name}]\n");
            for (k, v) in entries {
                let _ = writeln!(out, "{k} = {v}");
            }
        }
        out
    }

    /// Drops a whole section (used to strip manifest-only sections).
    pub fn remove_section(&mut self, name: &str) -> Option<BTreeMap<String, String>> {
        self.sections.remove(name)
    }
}
