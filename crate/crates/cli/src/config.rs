//! Optional key=value configuration file. Every long flag has a key of the
//! same name; values given on the command line win.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{bail, Context, Result};

#[derive(Debug, Clone, Default)]
pub struct Config {
    map: BTreeMap<String, String>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Config> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let mut map = BTreeMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with(';') || line.starts_with('#') {
                continue;
            }
            match line.split_once('=') {
                Some((k, v)) => {
                    map.insert(k.trim().to_string(), v.trim().to_string());
                }
                None => bail!(
                    "{}:{}: expected key=value, got {line:?}",
                    path.display(),
                    lineno + 1
                ),
            }
        }
        Ok(Config { map })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.map.get(key).map(String::as_str)
    }

    /// Command-line value if present, else the config value, else `default`.
    pub fn resolve<T: Clone>(
        &self,
        flag: Option<T>,
        key: &str,
        parse: impl Fn(&str) -> Result<T>,
        default: T,
    ) -> Result<T> {
        if let Some(v) = flag {
            return Ok(v);
        }
        match self.get(key) {
            Some(raw) => parse(raw).with_context(|| format!("config key {key}")),
            None => Ok(default),
        }
    }

    pub fn resolve_bool(&self, flag: bool, key: &str) -> Result<bool> {
        if flag {
            return Ok(true);
        }
        match self.get(key) {
            Some(raw) => match raw {
                "true" | "1" | "yes" | "on" => Ok(true),
                "false" | "0" | "no" | "off" => Ok(false),
                other => bail!("config key {key}: expected a boolean, got {other:?}"),
            },
            None => Ok(false),
        }
    }
}
