//! Flat `key = value` configuration with command-line overrides.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use sha2::{Digest, Sha256};

use crate::error::CliError;

/// Every key a config may set.
pub const KEYS: [&str; 11] = [
    "epsilon",
    "epsilon_h",
    "freq_over_h",
    "rounds",
    "gate",
    "duration",
    "budget",
    "bisect_tol",
    "include_decoupling",
    "workers",
    "out",
];

/// Keys that affect how a table is produced but not its contents.
pub const EXECUTION_KEYS: [&str; 2] = ["workers", "out"];

/// Resolved configuration: command defaults, then file, then overrides.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Config {
    values: BTreeMap<String, String>,
}

impl Config {
    pub fn parse_text(text: &str) -> Result<Self, CliError> {
        let mut values = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {}: expected `key = value`", n + 1)))?;
            let k = k.trim();
            check_key(k)?;
            values.insert(k.to_owned(), v.trim().to_owned());
        }
        Ok(Self { values })
    }

    pub fn from_pairs<'a>(pairs: impl IntoIterator<Item = (&'a str, &'a str)>) -> Result<Self, CliError> {
        let mut c = Self::default();
        for (k, v) in pairs {
            check_key(k)?;
            c.values.insert(k.to_owned(), v.to_owned());
        }
        Ok(c)
    }

    /// Keys of `other` win.
    pub fn merged(mut self, other: &Self) -> Self {
        for (k, v) in &other.values {
            self.values.insert(k.clone(), v.clone());
        }
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn require(&self, key: &str) -> Result<&str, CliError> {
        self.get(key).ok_or_else(|| CliError::Config(format!("missing key `{key}`")))
    }

    pub fn floats(&self, key: &str) -> Result<Vec<f64>, CliError> {
        parse_grid(key, self.require(key)?)
    }

    pub fn float(&self, key: &str) -> Result<f64, CliError> {
        let v = self.floats(key)?;
        match v.as_slice() {
            [x] => Ok(*x),
            _ => Err(CliError::Grid(format!("`{key}` must be a single value"))),
        }
    }

    pub fn usizes(&self, key: &str) -> Result<Vec<usize>, CliError> {
        self.require(key)?
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<usize>()
                    .map_err(|_| CliError::Grid(format!("`{key}`: `{}` is not a non-negative integer", s.trim())))
            })
            .collect()
    }

    pub fn flag(&self, key: &str) -> Result<bool, CliError> {
        match self.require(key)?.to_ascii_lowercase().as_str() {
            "1" | "true" | "on" | "yes" => Ok(true),
            "0" | "false" | "off" | "no" => Ok(false),
            other => Err(CliError::Config(format!("`{key}`: `{other}` is not a boolean"))),
        }
    }

    /// Canonical `key = value` lines in key order. Execution-only keys
    /// (`workers`, `out`) are left out so they cannot change a table.
    pub fn canonical(&self) -> String {
        let mut s = String::new();
        for (k, v) in self.values.iter().filter(|(k, _)| !EXECUTION_KEYS.contains(&k.as_str())) {
            let _ = writeln!(s, "{k} = {v}");
        }
        s
    }

    pub fn sha256(&self) -> String {
        format!("{:x}", Sha256::digest(self.canonical().as_bytes()))
    }
}

fn check_key(k: &str) -> Result<(), CliError> {
    if KEYS.contains(&k) {
        Ok(())
    } else {
        Err(CliError::Config(format!("unknown key `{k}`")))
    }
}

/// Comma list of numbers, or `lin:a:b:n` / `log:a:b:n` with `n` points.
pub fn parse_grid(key: &str, spec: &str) -> Result<Vec<f64>, CliError> {
    let bad = |what: &str| CliError::Grid(format!("`{key}`: {what}"));
    let spec = spec.trim();
    let values = if let Some(rest) = spec.strip_prefix("lin:").or_else(|| spec.strip_prefix("log:")) {
        let parts: Vec<&str> = rest.split(':').collect();
        let [a, b, n] = parts.as_slice() else {
            return Err(bad("range form is `lin:a:b:n` or `log:a:b:n`"));
        };
        let a: f64 = a.trim().parse().map_err(|_| bad("bad range start"))?;
        let b: f64 = b.trim().parse().map_err(|_| bad("bad range end"))?;
        let n: usize = n.trim().parse().map_err(|_| bad("bad point count"))?;
        if n == 0 {
            return Err(bad("empty range"));
        }
        let log = spec.starts_with("log:");
        if log && !(a > 0.0 && b > 0.0) {
            return Err(bad("log range needs positive ends"));
        }
        (0..n)
            .map(|k| {
                let s = if n == 1 { 0.0 } else { k as f64 / (n - 1) as f64 };
                if log {
                    (a.ln() + s * (b.ln() - a.ln())).exp()
                } else {
                    a + s * (b - a)
                }
            })
            .collect()
    } else {
        spec.split(',')
            .map(|s| s.trim().parse::<f64>().map_err(|_| bad(&format!("`{}` is not a number", s.trim()))))
            .collect::<Result<Vec<_>, _>>()?
    };
    if values.is_empty() {
        return Err(bad("empty grid"));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(bad("non-finite value"));
    }
    Ok(values)
}
