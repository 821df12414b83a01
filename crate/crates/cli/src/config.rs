//! Dataset path and defaults: flag, then config file, then `HKR_DATA`, then bundled.

use anyhow::{Context, Result};
use hkr_core::families::Dataset;
use serde::Deserialize;
use std::path::{Path, PathBuf};

pub const DATA_ENV: &str = "HKR_DATA";

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    data: Option<PathBuf>,
    parallel: Option<usize>,
}

#[derive(Debug, Default)]
pub struct Settings {
    pub data: Option<PathBuf>,
    pub parallel: Option<usize>,
}

impl Settings {
    pub fn resolve(flag: Option<&Path>, config: Option<&Path>) -> Result<Settings> {
        let file = match config {
            Some(p) => {
                let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
                toml::from_str::<FileConfig>(&text).with_context(|| format!("parsing {}", p.display()))?
            }
            None => FileConfig::default(),
        };
        let data = flag
            .map(Path::to_path_buf)
            .or(file.data)
            .or_else(|| std::env::var_os(DATA_ENV).map(PathBuf::from));
        Ok(Settings { data, parallel: file.parallel })
    }

    pub fn dataset(&self) -> hkr_core::Result<Dataset> {
        match &self.data {
            Some(p) => Dataset::load(p),
            None => Dataset::bundled(),
        }
    }
}
