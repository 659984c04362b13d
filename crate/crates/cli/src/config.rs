//! Flat `key = value` run configuration.
//!
//! Values given on the command line win over the config file, which wins
//! over built-in defaults.

use std::collections::BTreeMap;
use std::str::FromStr;

use crate::CliError;

pub const KEYS: &[&str] = &[
    "granularity",
    "subword_vocab",
    "compress",
    "segregate",
    "prune",
    "iterations",
    "seed",
    "workers",
    "trials",
    "min_votes",
    "annotator",
    "punct",
];

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RunConfig {
    values: BTreeMap<String, String>,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<RunConfig, CliError> {
        let mut values = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Format(format!("config line {}: expected key = value", i + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            if !KEYS.contains(&key) {
                return Err(CliError::Format(format!("config line {}: unknown key {key:?}", i + 1)));
            }
            values.insert(key.to_owned(), value.to_owned());
        }
        Ok(RunConfig { values })
    }

    /// `flag`, else the config value for `key`, else `default`.
    pub fn resolve<T>(&self, flag: Option<T>, key: &str, default: T) -> Result<T, CliError>
    where
        T: FromStr,
        T::Err: std::fmt::Display,
    {
        Ok(self.resolve_opt(flag, key)?.unwrap_or(default))
    }

    pub fn resolve_opt<T>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, CliError>
    where
        T: FromStr,
        T::Err: std::fmt::Display,
    {
        debug_assert!(KEYS.contains(&key), "undeclared config key {key}");
        if flag.is_some() {
            return Ok(flag);
        }
        match self.values.get(key) {
            Some(raw) => raw
                .parse()
                .map(Some)
                .map_err(|e| CliError::Format(format!("config key {key}: {e}"))),
            None => Ok(None),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence() {
        let cfg = RunConfig::parse("# run\nprune = 10\niterations=3\n\n").unwrap();
        assert_eq!(cfg.resolve(Some(5u64), "prune", 0).unwrap(), 5);
        assert_eq!(cfg.resolve(None, "prune", 0u64).unwrap(), 10);
        assert_eq!(cfg.resolve(None, "seed", 42u64).unwrap(), 42);
        assert_eq!(cfg.resolve_opt::<usize>(None, "iterations").unwrap(), Some(3));
    }

    #[test]
    fn rejects_bad_lines() {
        assert!(RunConfig::parse("prune").is_err());
        assert!(RunConfig::parse("colour = red").is_err());
        let cfg = RunConfig::parse("prune = many").unwrap();
        assert!(cfg.resolve(None, "prune", 0u64).is_err());
    }
}
