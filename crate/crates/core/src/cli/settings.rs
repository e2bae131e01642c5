//! `key=value` config files layered under command-line flags.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use super::CliError;
use crate::error::Error;

/// Environment variable consulted when no seed is given.
pub const SEED_ENV: &str = "RHYTHM_KIT_SEED";

/// Keys every subcommand accepts in its config file.
const COMMON_KEYS: &[&str] = &["seed", "output_dir"];

/// Canonical form of a config key or flag name: lowercase, underscores, and
/// without a leading `tau.` group.
fn normalize(key: &str) -> String {
    let k = key.trim().to_ascii_lowercase().replace('-', "_");
    match k.strip_prefix("tau.") {
        Some(rest) => rest.to_string(),
        None => k,
    }
}

#[derive(Debug, Default)]
pub struct Settings {
    values: BTreeMap<String, String>,
}

impl Settings {
    /// Read `path` if given, rejecting keys outside `allowed` and the common set.
    pub fn load(path: Option<&Path>, allowed: &[&str]) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, allowed)
    }

    pub fn parse(text: &str, allowed: &[&str]) -> Result<Self, CliError> {
        let mut values = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("config line {}: expected key=value", lineno + 1)))?;
            let key = normalize(k);
            if !COMMON_KEYS.contains(&key.as_str()) && !allowed.contains(&key.as_str()) {
                return Err(CliError::Usage(format!("config line {}: unknown key `{}`", lineno + 1, k.trim())));
            }
            values.insert(key, v.trim().to_string());
        }
        Ok(Self { values })
    }

    /// Flag value if given, else the config value, else `None`.
    pub fn opt<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, CliError> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.values.get(key) {
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| CliError::Usage(format!("config key `{key}`: cannot parse `{v}`"))),
            None => Ok(None),
        }
    }

    pub fn get<T: FromStr>(&self, flag: Option<T>, key: &str, default: T) -> Result<T, CliError> {
        Ok(self.opt(flag, key)?.unwrap_or(default))
    }

    /// Comma-separated list from flag values or the config.
    pub fn list<T: FromStr>(&self, flag: Vec<T>, key: &str) -> Result<Vec<T>, CliError> {
        if !flag.is_empty() {
            return Ok(flag);
        }
        match self.values.get(key) {
            Some(v) => v
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(|s| {
                    s.parse()
                        .map_err(|_| CliError::Usage(format!("config key `{key}`: cannot parse `{s}`")))
                })
                .collect(),
            None => Ok(Vec::new()),
        }
    }

    /// Flag, then config, then `RHYTHM_KIT_SEED`, then 0.
    pub fn seed(&self, flag: Option<u64>) -> Result<u64, CliError> {
        if let Some(s) = self.opt(flag, "seed")? {
            return Ok(s);
        }
        match std::env::var(SEED_ENV) {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("{SEED_ENV}: cannot parse `{v}` as a seed"))),
            Err(_) => Ok(0),
        }
    }

    pub fn output_dir(&self, flag: Option<PathBuf>) -> Result<PathBuf, CliError> {
        self.opt(flag, "output_dir")?
            .ok_or_else(|| CliError::Usage("no output directory: pass --out or set output_dir".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let s = Settings::parse("trials = 5\ntau.u_l=0.6 # comment\n\n", &["trials", "u_l"]).unwrap();
        assert_eq!(s.get(None, "trials", 1usize).unwrap(), 5);
        assert_eq!(s.get(Some(9usize), "trials", 1).unwrap(), 9);
        assert_eq!(s.get(None, "u_l", 0.0).unwrap(), 0.6);
        assert_eq!(s.get(None, "absent", 3u8).unwrap(), 3);
    }

    #[test]
    fn unknown_and_malformed_lines_are_usage_errors() {
        assert!(matches!(Settings::parse("bogus=1", &["trials"]), Err(CliError::Usage(_))));
        assert!(matches!(Settings::parse("trials", &["trials"]), Err(CliError::Usage(_))));
        let s = Settings::parse("trials=abc", &["trials"]).unwrap();
        assert!(matches!(s.get(None, "trials", 1usize), Err(CliError::Usage(_))));
    }

    #[test]
    fn lists_split_on_commas() {
        let s = Settings::parse("taus=0.9, 1.0,1.1", &["taus"]).unwrap();
        assert_eq!(s.list::<f64>(Vec::new(), "taus").unwrap(), vec![0.9, 1.0, 1.1]);
        assert_eq!(s.list(vec![0.5], "taus").unwrap(), vec![0.5]);
    }

    #[test]
    fn explicit_seed_wins() {
        let s = Settings::parse("seed=4", &[]).unwrap();
        assert_eq!(s.seed(Some(7)).unwrap(), 7);
        assert_eq!(s.seed(None).unwrap(), 4);
    }
}
