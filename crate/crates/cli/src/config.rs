//! `key = value` configuration files and their merge with command-line flags.

use std::collections::BTreeMap;
use std::path::Path;

use pgx_core::Limits;

use crate::error::{CliError, CliResult};

pub const DEFAULT_SEED: u64 = 20240917;

/// Largest bar-oracle cap used without a cost warning.
pub const BAR_CAP_WARN: u128 = 81;

/// Settings shared by every command.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Settings {
    pub seed: u64,
    pub limits: Limits,
    pub json: bool,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            seed: DEFAULT_SEED,
            limits: Limits::default(),
            json: false,
        }
    }
}

/// Values given on the command line; `None` leaves the config or default.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub json: bool,
    pub enum_threshold: Option<u128>,
    pub bar_cap: Option<u128>,
    pub class_cap: Option<usize>,
}

/// Parses `key = value` lines; `#` starts a comment and blank lines are ignored.
pub fn parse_config(text: &str) -> CliResult<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| CliError::Config {
            line: i + 1,
            message: format!("expected `key = value`, found `{line}`"),
        })?;
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() || v.is_empty() {
            return Err(CliError::Config {
                line: i + 1,
                message: "empty key or value".into(),
            });
        }
        out.insert(k.to_string(), v.to_string());
    }
    Ok(out)
}

fn parse_value<T: std::str::FromStr>(key: &str, value: &str) -> CliResult<T> {
    value.parse().map_err(|_| CliError::Config {
        line: 0,
        message: format!("invalid value `{value}` for `{key}`"),
    })
}

impl Settings {
    /// Defaults, then the config file, then the flags.
    pub fn resolve(config: Option<&Path>, flags: &Overrides) -> CliResult<Settings> {
        let mut s = Settings::default();
        if let Some(path) = config {
            let text = std::fs::read_to_string(path).map_err(|source| CliError::Read {
                path: path.to_path_buf(),
                source,
            })?;
            s.apply(&parse_config(&text)?)?;
        }
        if let Some(seed) = flags.seed {
            s.seed = seed;
        }
        if flags.json {
            s.json = true;
        }
        if let Some(t) = flags.enum_threshold {
            s.limits.enum_threshold = t;
        }
        if let Some(c) = flags.bar_cap {
            s.limits.bar_cap = c;
        }
        if let Some(c) = flags.class_cap {
            s.limits.class_cap = c;
        }
        Ok(s)
    }

    fn apply(&mut self, kv: &BTreeMap<String, String>) -> CliResult<()> {
        for (k, v) in kv {
            match k.as_str() {
                "seed" => self.seed = parse_value(k, v)?,
                "json" => self.json = parse_value(k, v)?,
                "enum_threshold" => self.limits.enum_threshold = parse_value(k, v)?,
                "bar_cap" => self.limits.bar_cap = parse_value(k, v)?,
                "class_cap" => self.limits.class_cap = parse_value(k, v)?,
                "nq_class_limit" => self.limits.nq_class_limit = parse_value(k, v)?,
                other => {
                    return Err(CliError::Config {
                        line: 0,
                        message: format!("unknown key `{other}`"),
                    })
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comments_and_blank_lines() {
        let kv = parse_config("# settings\nseed = 7\n\nbar_cap=27 # small\n").unwrap();
        assert_eq!(kv["seed"], "7");
        assert_eq!(kv["bar_cap"], "27");
    }

    #[test]
    fn malformed_line_reports_its_number() {
        let err = parse_config("seed = 1\nbogus\n").unwrap_err();
        assert!(matches!(err, CliError::Config { line: 2, .. }));
    }

    #[test]
    fn config_keys_apply_and_unknown_keys_fail() {
        let mut s = Settings::default();
        s.apply(&parse_config("seed = 5\nclass_cap = 4\n").unwrap()).unwrap();
        assert_eq!((s.seed, s.limits.class_cap), (5, 4));
        assert!(s.apply(&parse_config("colour = red\n").unwrap()).is_err());
    }
}
