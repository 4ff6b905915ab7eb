use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Deserialize;
use tracefault_core::benchgen::join_answers;
use tracefault_core::{parse_scenario, parse_trace_blind, GroundTruth, Scenario};

/// Writes through a temporary sibling and renames it into place.
pub fn atomic_write(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let name = path.file_name().context("output path has no file name")?.to_string_lossy();
    let tmp = path.with_file_name(format!(".{name}.tmp{}", std::process::id()));
    fs::write(&tmp, bytes).with_context(|| format!("writing {}", tmp.display()))?;
    fs::rename(&tmp, path).with_context(|| format!("renaming into {}", path.display()))?;
    Ok(())
}

pub fn read(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).with_context(|| format!("reading {}", path.display()))
}

/// `*.json` files directly inside `dir`, sorted by name.
pub fn json_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for entry in fs::read_dir(dir).with_context(|| format!("listing {}", dir.display()))? {
        let p = entry?.path();
        if p.is_file() && p.extension().is_some_and(|e| e == "json") {
            out.push(p);
        }
    }
    out.sort();
    Ok(out)
}

fn sub_or_self(dir: &Path, sub: &str) -> PathBuf {
    let s = dir.join(sub);
    if s.is_dir() {
        s
    } else {
        dir.to_path_buf()
    }
}

pub fn load_scenarios(dir: &Path) -> Result<Vec<Scenario>> {
    json_files(&sub_or_self(dir, "scenarios"))?
        .iter()
        .map(|p| parse_scenario(&read(p)?).with_context(|| format!("parsing {}", p.display())))
        .collect()
}

pub fn load_validation(dir: &Path) -> Result<Vec<Scenario>> {
    json_files(&sub_or_self(dir, "validation"))?
        .iter()
        .map(|p| parse_scenario(&read(p)?).with_context(|| format!("parsing {}", p.display())))
        .collect()
}

/// Blind traces joined with their answer key.
pub fn load_blind(dir: &Path, answers: &Path) -> Result<Vec<Scenario>> {
    let key: std::collections::BTreeMap<String, GroundTruth> = serde_json::from_slice(&read(answers)?)
        .map_err(|e| tracefault_core::Error::MalformedJson(e.to_string()))
        .with_context(|| format!("parsing {}", answers.display()))?;
    let traces = json_files(&sub_or_self(dir, "blind"))?
        .iter()
        .map(|p| parse_trace_blind(&read(p)?).with_context(|| format!("parsing {}", p.display())))
        .collect::<Result<Vec<_>>>()?;
    Ok(join_answers(traces, &key)?)
}

/// Settings read from `--config`; flags and environment override them.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub split_seed: Option<u64>,
    pub bootstrap_seed: Option<u64>,
    pub max_depth: Option<usize>,
    pub weights: Option<PathBuf>,
    pub feature_config: Option<PathBuf>,
    pub jobs: Option<usize>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        match path {
            None => Ok(FileConfig::default()),
            Some(p) => serde_json::from_slice(&read(p)?)
                .map_err(|e| tracefault_core::Error::MalformedJson(e.to_string()))
                .with_context(|| format!("parsing {}", p.display())),
        }
    }
}
