//! Gathers JSON arguments from flags and an optional input document.

use std::collections::BTreeMap;
use std::io::Read;

use serde_json::Value;
use th_core::wire::{self, DecodeError};
use th_core::{annihilator, quotient, GroupSpec, Limits, QuotientMap, Subgroup};

use crate::CliError;

/// Named JSON arguments. Flags override keys of the `--input` document.
pub struct Args {
    values: BTreeMap<String, Value>,
    pub limits: Limits,
}

/// Parses a flag value: inline JSON, or `@path` to read JSON from a file.
pub fn parse_flag(name: &str, raw: &str) -> Result<Value, CliError> {
    let text = match raw.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| CliError::input(format!("--{name}: cannot read {path}: {e}")))?,
        None => raw.to_string(),
    };
    serde_json::from_str(&text).map_err(|e| CliError::input(format!("--{name}: malformed JSON: {e}")))
}

pub fn limits_from_env() -> Result<Limits, CliError> {
    let mut limits = Limits::default();
    if let Ok(raw) = std::env::var("TH_MAX_ORDER") {
        limits.max_order = raw
            .trim()
            .parse()
            .map_err(|_| CliError::input(format!("TH_MAX_ORDER must be a positive integer, got `{raw}`")))?;
        if limits.max_order == 0 {
            return Err(CliError::input("TH_MAX_ORDER must be positive"));
        }
    }
    Ok(limits)
}

impl Args {
    pub fn new(input: Option<&str>, flags: &[(&str, &Option<String>)]) -> Result<Self, CliError> {
        let mut values = BTreeMap::new();
        if let Some(path) = input {
            let text = if path == "-" {
                let mut s = String::new();
                std::io::stdin()
                    .read_to_string(&mut s)
                    .map_err(|e| CliError::input(format!("cannot read standard input: {e}")))?;
                s
            } else {
                std::fs::read_to_string(path)
                    .map_err(|e| CliError::input(format!("cannot read {path}: {e}")))?
            };
            let doc: Value = serde_json::from_str(&text)
                .map_err(|e| CliError::input(format!("input document: malformed JSON: {e}")))?;
            let Value::Object(map) = doc else {
                return Err(CliError::input("input document must be a JSON object"));
            };
            values.extend(map);
        }
        for (name, flag) in flags {
            if let Some(raw) = flag {
                values.insert(name.to_string(), parse_flag(name, raw)?);
            }
        }
        Ok(Args {
            values,
            limits: limits_from_env()?,
        })
    }

    pub fn get(&self, key: &str) -> Result<&Value, CliError> {
        self.values
            .get(key)
            .ok_or_else(|| CliError::input(format!("missing argument `{key}`")))
    }

    pub fn opt(&self, key: &str) -> Option<&Value> {
        self.values.get(key)
    }

    pub fn f64_or(&self, key: &str, default: f64) -> Result<f64, CliError> {
        match self.opt(key) {
            None => Ok(default),
            Some(v) => v
                .as_f64()
                .ok_or_else(|| CliError::input(format!("`{key}` must be a number"))),
        }
    }

    pub fn group(&self) -> Result<GroupSpec, CliError> {
        Ok(wire::parse_group(self.get("group")?, &self.limits)?)
    }

    pub fn subgroup(&self, spec: &GroupSpec) -> Result<Subgroup, CliError> {
        Ok(wire::parse_subgroup(spec, self.get("subgroup")?)?)
    }

    /// `Λ` given directly with `--lambda`, else the annihilator of `--subgroup`.
    pub fn lambda(&self, spec: &GroupSpec) -> Result<Subgroup, CliError> {
        if let Some(v) = self.opt("lambda") {
            return Ok(wire::parse_subgroup(spec, v)?);
        }
        let h = self.subgroup(spec)?;
        Ok(annihilator(spec, &h)?)
    }

    pub fn quotient(&self, spec: &GroupSpec) -> Result<QuotientMap, CliError> {
        Ok(quotient(spec, &self.lambda(spec)?)?)
    }
}

impl From<DecodeError> for CliError {
    fn from(e: DecodeError) -> Self {
        match e {
            DecodeError::Wire(w) => CliError::input(w.to_string()),
            DecodeError::Domain(d) => CliError::Domain(d),
        }
    }
}
