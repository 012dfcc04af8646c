//! Settings resolution: flags, then `CAYSTIR_*` environment variables (both
//! handled by clap), then the TOML config file, then built-in defaults.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use caystir::oracle::OracleConfig;
use clap::ValueEnum;
use serde::Deserialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Table,
    Csv,
    Json,
}

/// Keys accepted in the config file; all optional.
#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FileConfig {
    pub oracle_element_cap: Option<usize>,
    pub oracle_class_budget: Option<u64>,
    pub threads: Option<usize>,
    pub cache_dir: Option<PathBuf>,
    pub output_format: Option<Format>,
    pub seed: Option<u64>,
    pub analytic_streaming: Option<bool>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config file {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing config file {}", path.display()))
    }
}

/// Values already resolved by clap from flags or the environment.
#[derive(Debug, Default)]
pub struct Overrides {
    pub oracle_element_cap: Option<usize>,
    pub oracle_class_budget: Option<u64>,
    pub threads: Option<usize>,
    pub cache_dir: Option<PathBuf>,
    pub output_format: Option<Format>,
    pub seed: Option<u64>,
    pub analytic_streaming: bool,
}

#[derive(Debug, Clone)]
pub struct CliConfig {
    /// Largest degree for element-level work on `Sym(n)`; `Alt(n)` and seed
    /// enumeration get one more.
    pub oracle_element_cap: usize,
    pub oracle_class_budget: u64,
    /// 0 lets rayon pick.
    pub threads: usize,
    pub cache_dir: PathBuf,
    pub output_format: Format,
    pub seed: u64,
    pub analytic_streaming: bool,
}

impl CliConfig {
    pub fn resolve(over: Overrides, file: Option<FileConfig>) -> Result<Self> {
        let file = file.unwrap_or_default();
        let base = OracleConfig::default();
        let config = CliConfig {
            oracle_element_cap: over
                .oracle_element_cap
                .or(file.oracle_element_cap)
                .unwrap_or(base.max_sym_degree),
            oracle_class_budget: over
                .oracle_class_budget
                .or(file.oracle_class_budget)
                .unwrap_or(base.class_budget),
            threads: over.threads.or(file.threads).unwrap_or(0),
            cache_dir: over
                .cache_dir
                .or(file.cache_dir)
                .unwrap_or_else(default_cache_dir),
            output_format: over.output_format.or(file.output_format).unwrap_or(Format::Table),
            seed: over.seed.or(file.seed).unwrap_or(0x5eed),
            analytic_streaming: over.analytic_streaming || file.analytic_streaming.unwrap_or(false),
        };
        if config.oracle_element_cap == 0 {
            bail!("oracle element cap must be positive");
        }
        if config.oracle_class_budget == 0 {
            bail!("oracle class budget must be positive");
        }
        Ok(config)
    }

    pub fn oracle(&self) -> OracleConfig {
        OracleConfig {
            max_sym_degree: self.oracle_element_cap,
            max_alt_degree: self.oracle_element_cap + 1,
            enumeration_cap: self.oracle_element_cap + 1,
            class_budget: self.oracle_class_budget,
            analytic_streaming: self.analytic_streaming,
            ..OracleConfig::default()
        }
    }
}

fn default_cache_dir() -> PathBuf {
    if let Some(dir) = std::env::var_os("XDG_CACHE_HOME").filter(|d| !d.is_empty()) {
        return PathBuf::from(dir).join("caystir");
    }
    if let Some(home) = std::env::var_os("HOME").filter(|d| !d.is_empty()) {
        return PathBuf::from(home).join(".cache").join("caystir");
    }
    PathBuf::from(".caystir-cache")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_beat_file_beat_defaults() {
        let file: FileConfig = toml::from_str(
            "threads = 3\nseed = 7\noutput_format = \"csv\"\noracle_element_cap = 8\n",
        )
        .unwrap();
        let over = Overrides {
            seed: Some(11),
            ..Overrides::default()
        };
        let c = CliConfig::resolve(over, Some(file)).unwrap();
        assert_eq!(c.seed, 11);
        assert_eq!(c.threads, 3);
        assert_eq!(c.output_format, Format::Csv);
        assert_eq!(c.oracle().max_alt_degree, 9);
        assert_eq!(c.oracle_class_budget, OracleConfig::default().class_budget);
    }

    #[test]
    fn rejects_unknown_keys_and_zero_caps() {
        assert!(toml::from_str::<FileConfig>("colour = 1").is_err());
        let over = Overrides {
            oracle_element_cap: Some(0),
            ..Overrides::default()
        };
        assert!(CliConfig::resolve(over, None).is_err());
    }
}
