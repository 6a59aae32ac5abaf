//! Row sinks for CSV and JSON-lines output.
//!
//! CSV output starts with one `#` comment line recording the tool version,
//! schema, command and every resolved setting, then a header row. JSON-lines
//! output starts with an equivalent `meta` object. Nothing time-dependent is
//! written, so reruns are byte-identical.

use std::io::Write;

use serde::Serialize;

use super::args::Format;
use crate::error::Result;

pub const SCHEMA_VERSION: u32 = 1;

/// Provenance written ahead of the rows.
#[derive(Debug, Clone)]
pub struct Meta {
    pub command: &'static str,
    pub settings: Vec<(&'static str, String)>,
}

impl Meta {
    pub fn new(command: &'static str) -> Self {
        Self {
            command,
            settings: Vec::new(),
        }
    }

    pub fn set(&mut self, key: &'static str, value: impl ToString) -> &mut Self {
        self.settings.push((key, value.to_string()));
        self
    }
}

pub fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

enum Inner {
    Csv(Box<csv::Writer<Box<dyn Write>>>),
    Jsonl(Box<dyn Write>),
}

pub struct RowSink {
    inner: Inner,
}

impl RowSink {
    pub fn new(mut out: Box<dyn Write>, format: Format, meta: &Meta) -> Result<Self> {
        let inner = match format {
            Format::Csv => {
                write!(
                    out,
                    "# noisygt {} schema={} command={}",
                    env!("CARGO_PKG_VERSION"),
                    SCHEMA_VERSION,
                    meta.command
                )?;
                for (k, v) in &meta.settings {
                    write!(out, " {k}={v}")?;
                }
                writeln!(out)?;
                Inner::Csv(Box::new(csv::Writer::from_writer(out)))
            }
            Format::Jsonl => {
                let settings: serde_json::Map<String, serde_json::Value> = meta
                    .settings
                    .iter()
                    .map(|(k, v)| (k.to_string(), serde_json::Value::String(v.clone())))
                    .collect();
                let head = serde_json::json!({
                    "meta": {
                        "tool": "noisygt",
                        "version": env!("CARGO_PKG_VERSION"),
                        "schema": SCHEMA_VERSION,
                        "command": meta.command,
                        "settings": settings,
                    }
                });
                serde_json::to_writer(&mut out, &head)?;
                writeln!(out)?;
                Inner::Jsonl(out)
            }
        };
        Ok(Self { inner })
    }

    /// Write and flush one row.
    pub fn row<S: Serialize>(&mut self, row: &S) -> Result<()> {
        match &mut self.inner {
            Inner::Csv(w) => {
                w.serialize(row)?;
                w.flush()?;
            }
            Inner::Jsonl(w) => {
                serde_json::to_writer(&mut *w, row)?;
                writeln!(w)?;
                w.flush()?;
            }
        }
        Ok(())
    }
}
