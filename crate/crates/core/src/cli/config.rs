//! Flat `key = value` configuration files.
//!
//! Keys are flag names without the leading dashes (`theta`, `mult`,
//! `k-assumed`, ...); underscores and dashes are interchangeable. Lists use
//! commas. `#` starts a comment. A flag given on the command line always
//! wins over the file.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use clap::ValueEnum;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConfigFile {
    entries: BTreeMap<String, String>,
}

fn bad(key: &str, value: &str, why: impl std::fmt::Display) -> Error {
    Error::Parameter(format!("config key {key} = {value:?}: {why}"))
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| Error::Parse {
                line: i + 1,
                msg: format!("expected key = value, got {raw:?}"),
            })?;
            entries.insert(k.trim().replace('_', "-"), v.trim().to_string());
        }
        Ok(Self { entries })
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    /// `flag`, else the file's value for `key`.
    pub fn value<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        if flag.is_some() {
            return Ok(flag);
        }
        self.raw(key)
            .map(|v| v.parse::<T>().map_err(|e| bad(key, v, e)))
            .transpose()
    }

    /// A non-empty `flag` list, else the file's list for `key`.
    pub fn list<T: FromStr>(&self, flag: Vec<T>, key: &str) -> Result<Vec<T>>
    where
        T::Err: std::fmt::Display,
    {
        if !flag.is_empty() {
            return Ok(flag);
        }
        match self.raw(key) {
            None => Ok(Vec::new()),
            Some(v) => v
                .split(',')
                .map(|s| s.trim().parse::<T>().map_err(|e| bad(key, v, e)))
                .collect(),
        }
    }

    pub fn choice<T: ValueEnum>(&self, flag: Option<T>, key: &str) -> Result<Option<T>> {
        if flag.is_some() {
            return Ok(flag);
        }
        self.raw(key)
            .map(|v| T::from_str(v, true).map_err(|e| bad(key, v, e)))
            .transpose()
    }

    pub fn choices<T: ValueEnum>(&self, flag: Vec<T>, key: &str) -> Result<Vec<T>> {
        if !flag.is_empty() {
            return Ok(flag);
        }
        match self.raw(key) {
            None => Ok(Vec::new()),
            Some(v) => v
                .split(',')
                .map(|s| T::from_str(s.trim(), true).map_err(|e| bad(key, v, e)))
                .collect(),
        }
    }
}
