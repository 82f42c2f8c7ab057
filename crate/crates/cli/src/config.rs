//! Flat `key = value` configuration with `[section]` headers.
//!
//! Lines starting with `#` or `;` are comments. Keys must sit inside a
//! section and may appear once per section. [`Config::to_text`] writes the
//! canonical form, which parses back to an equal config.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::CliError;

/// Recognised keys, by section.
pub const KNOWN_KEYS: &[(&str, &[&str])] = &[
    ("run", &["out", "workers"]),
    ("field", &["p", "k"]),
    ("modulus", &["q", "max_degree"]),
    (
        "params",
        &[
            "k", "delta", "mu", "rho", "epsilon", "epsilon_mode", "h_epsilon", "sigma", "t",
            "z", "x_min", "x_max", "points", "c", "max_degree", "n", "k_list", "tolerance",
            "bulk", "character", "sigma_list", "t_points",
        ],
    ),
    (
        "grid",
        &[
            "kind", "r_min", "r_max", "theta_min", "theta_max", "n_r", "n_theta", "radius",
            "sigma_min", "sigma_max", "t_min", "t_max", "n_sigma", "n_t",
        ],
    ),
    ("target", &["kind", "c", "coeffs", "a", "character", "label"]),
    ("phases", &["source", "file", "seed", "min_degree", "max_degree"]),
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

#[derive(Debug, Clone, Default)]
pub struct Config {
    sections: BTreeMap<String, BTreeMap<String, String>>,
    lines: BTreeMap<(String, String), usize>,
}

impl PartialEq for Config {
    fn eq(&self, other: &Self) -> bool {
        self.sections == other.sections
    }
}

fn valid_name(s: &str) -> bool {
    !s.is_empty()
        && s
            .chars()
            .all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
}

impl Config {
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut cfg = Config::default();
        let mut current: Option<String> = None;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let err = |message: String| ParseError { line, message };
            let s = raw.trim();
            if s.is_empty() || s.starts_with('#') || s.starts_with(';') {
                continue;
            }
            if let Some(rest) = s.strip_prefix('[') {
                let name = rest
                    .strip_suffix(']')
                    .ok_or_else(|| err(format!("unterminated section header {s:?}")))?
                    .trim();
                if !valid_name(name) {
                    return Err(err(format!("invalid section name {name:?}")));
                }
                cfg.sections.entry(name.to_string()).or_default();
                current = Some(name.to_string());
                continue;
            }
            let (key, value) = s
                .split_once('=')
                .ok_or_else(|| err(format!("expected `key = value`, found {s:?}")))?;
            let key = key.trim();
            if !valid_name(key) {
                return Err(err(format!("invalid key {key:?}")));
            }
            let section = current
                .clone()
                .ok_or_else(|| err(format!("key {key:?} appears before any [section]")))?;
            let entries = cfg.sections.get_mut(&section).expect("section registered");
            if entries.contains_key(key) {
                return Err(err(format!("duplicate key [{section}] {key}")));
            }
            entries.insert(key.to_string(), value.trim().to_string());
            cfg.lines.insert((section, key.to_string()), line);
        }
        Ok(cfg)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (i, (name, entries)) in self.sections.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            out.push_str(&format!("[{name}]\n"));
            for (k, v) in entries {
                out.push_str(&format!("{k} = {v}\n"));
            }
        }
        out
    }

    /// Unknown sections and keys, each with its line number.
    pub fn unknown_keys(&self) -> Vec<ParseError> {
        let mut out = Vec::new();
        for (section, entries) in &self.sections {
            let known = KNOWN_KEYS.iter().find(|(s, _)| s == section).map(|(_, k)| *k);
            for key in entries.keys() {
                if !known.is_some_and(|k| k.contains(&key.as_str())) {
                    let message = match known {
                        Some(_) => format!("unknown key [{section}] {key}"),
                        None => format!("unknown section [{section}]"),
                    };
                    out.push(ParseError {
                        line: self.line(section, key),
                        message,
                    });
                }
            }
        }
        out.sort_by_key(|e| e.line);
        out
    }

    pub fn get_str(&self, section: &str, key: &str) -> Option<&str> {
        self.sections.get(section)?.get(key).map(String::as_str)
    }

    fn line(&self, section: &str, key: &str) -> usize {
        self.lines
            .get(&(section.to_string(), key.to_string()))
            .copied()
            .unwrap_or(0)
    }

    fn bad_value(&self, section: &str, key: &str, value: &str, what: &str) -> CliError {
        CliError::Config(format!(
            "line {}: [{section}] {key} = {value:?}: expected {what}",
            self.line(section, key)
        ))
    }

    pub fn get<T: FromStr>(&self, section: &str, key: &str) -> Result<Option<T>, CliError> {
        match self.get_str(section, key) {
            None => Ok(None),
            Some(v) => v
                .parse::<T>()
                .map(Some)
                .map_err(|_| self.bad_value(section, key, v, std::any::type_name::<T>())),
        }
    }

    pub fn get_or<T: FromStr>(&self, section: &str, key: &str, default: T) -> Result<T, CliError> {
        Ok(self.get(section, key)?.unwrap_or(default))
    }

    pub fn require<T: FromStr>(&self, section: &str, key: &str) -> Result<T, CliError> {
        self.get(section, key)?
            .ok_or_else(|| CliError::Config(format!("missing required key [{section}] {key}")))
    }

    /// Whitespace-separated list.
    pub fn list<T: FromStr>(&self, section: &str, key: &str) -> Result<Option<Vec<T>>, CliError> {
        match self.get_str(section, key) {
            None => Ok(None),
            Some(v) => v
                .split_whitespace()
                .map(|t| {
                    t.parse::<T>()
                        .map_err(|_| self.bad_value(section, key, v, "a whitespace-separated list"))
                })
                .collect::<Result<Vec<T>, _>>()
                .map(Some),
        }
    }

    /// Parses with a caller-supplied converter, reporting failures with the
    /// key's line.
    pub fn get_with<T>(
        &self,
        section: &str,
        key: &str,
        what: &str,
        f: impl FnOnce(&str) -> Option<T>,
    ) -> Result<Option<T>, CliError> {
        match self.get_str(section, key) {
            None => Ok(None),
            Some(v) => f(v)
                .map(Some)
                .ok_or_else(|| self.bad_value(section, key, v, what)),
        }
    }
}
