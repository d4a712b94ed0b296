//! `key = value` configuration files. Flags override file values; unknown
//! keys are usage errors so typos do not silently fall back to defaults.

use std::collections::HashMap;
use std::path::Path;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};

#[derive(Debug, Default)]
pub struct FileConfig {
    values: HashMap<String, String>,
}

fn normalize(key: &str) -> String {
    key.trim().replace('-', "_")
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(FileConfig::default());
        };
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config file {}", path.display()))?;
        let mut values = HashMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("line {}: expected `key = value`, got {raw:?}", lineno + 1))?;
            values.insert(normalize(key), value.trim().to_string());
        }
        Ok(FileConfig { values })
    }

    /// Reject keys outside the toolkit's vocabulary. One config file may
    /// serve several subcommands, so keys a particular subcommand does not
    /// read are fine; misspellings are not.
    pub fn check_keys(&self) -> Result<()> {
        const KNOWN: &[&str] = &[
            "d", "beta", "eta", "k", "n", "seed", "replicas", "sweeps", "burn_in", "out",
            "config", "points", "field", "depth", "samples", "variant", "init", "k_min",
            "k_max", "tol",
        ];
        for key in self.values.keys() {
            if !KNOWN.iter().any(|a| normalize(a) == *key) {
                bail!("unknown config key {key:?} (known keys: {})", KNOWN.join(", "));
            }
        }
        Ok(())
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        match self.values.get(&normalize(key)) {
            None => Ok(None),
            Some(raw) => raw
                .parse()
                .map(Some)
                .map_err(|e| anyhow!("config key {key}: cannot parse {raw:?}: {e}")),
        }
    }
}

/// CLI flag if present, else config file, else default.
pub fn resolve<T: FromStr + Clone>(
    flag: Option<T>,
    file: &FileConfig,
    key: &str,
    default: Option<T>,
) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    if let Some(v) = flag {
        return Ok(v);
    }
    if let Some(v) = file.get::<T>(key)? {
        return Ok(v);
    }
    default.ok_or_else(|| anyhow!("missing required parameter --{key}"))
}

pub fn resolve_optional<T: FromStr + Clone>(
    flag: Option<T>,
    file: &FileConfig,
    key: &str,
) -> Result<Option<T>>
where
    T::Err: std::fmt::Display,
{
    if flag.is_some() {
        return Ok(flag);
    }
    file.get::<T>(key)
}
