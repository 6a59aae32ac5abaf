//! Versioned plain-text dump of a design and, optionally, its outcomes.
//!
//! ```text
//! noisygt-design v1
//! n=3 m=4 delta=2 kind=cc seed=42
//! 0: 0 3
//! 1: 1 2
//! 2: 0 1
//! true=1100
//! displayed=1101
//! ```
//!
//! Item lines are `index: tests...`; the outcome lines are optional.

use std::io::{BufRead, Write};

use super::design::{DesignKind, PoolingDesign};
use super::outcomes::{OutcomeVector, Stage};
use crate::error::{Error, Result};

pub const DUMP_HEADER: &str = "noisygt-design v1";

#[derive(Debug, Clone, PartialEq)]
pub struct DesignDump {
    pub design: PoolingDesign,
    pub truth: Option<OutcomeVector>,
    pub displayed: Option<OutcomeVector>,
}

fn bit_string(o: &OutcomeVector) -> String {
    o.bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

pub fn write_dump<W: Write>(
    mut w: W,
    design: &PoolingDesign,
    truth: Option<&OutcomeVector>,
    displayed: Option<&OutcomeVector>,
) -> Result<()> {
    writeln!(w, "{DUMP_HEADER}")?;
    writeln!(
        w,
        "n={} m={} delta={} kind={} seed={}",
        design.n,
        design.m,
        design.delta,
        design.kind.label(),
        design.seed
    )?;
    for (x, tests) in design.item_tests.iter().enumerate() {
        write!(w, "{x}:")?;
        for a in tests {
            write!(w, " {a}")?;
        }
        writeln!(w)?;
    }
    if let Some(t) = truth {
        writeln!(w, "true={}", bit_string(t))?;
    }
    if let Some(s) = displayed {
        writeln!(w, "displayed={}", bit_string(s))?;
    }
    Ok(())
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn parse_bits(line: usize, s: &str, m: usize, stage: Stage) -> Result<OutcomeVector> {
    let bits = s
        .chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(parse_err(line, format!("bad bit {c:?}"))),
        })
        .collect::<Result<Vec<_>>>()?;
    if bits.len() != m {
        return Err(parse_err(line, format!("{} bits for m = {m}", bits.len())));
    }
    Ok(OutcomeVector { bits, stage })
}

pub fn read_dump<R: BufRead>(r: R) -> Result<DesignDump> {
    let mut lines = r.lines().enumerate().map(|(i, l)| (i + 1, l));
    let mut next = |what: &str| -> Result<(usize, String)> {
        match lines.next() {
            Some((i, l)) => Ok((i, l?)),
            None => Err(parse_err(0, format!("unexpected end of input, expected {what}"))),
        }
    };
    let (i, head) = next("header")?;
    if head.trim_end() != DUMP_HEADER {
        return Err(parse_err(i, format!("expected {DUMP_HEADER:?}")));
    }
    let (i, meta) = next("parameters")?;
    let (mut n, mut m, mut delta, mut kind, mut seed) = (None, None, None, None, None);
    for field in meta.split_whitespace() {
        let (key, value) = field
            .split_once('=')
            .ok_or_else(|| parse_err(i, format!("field {field:?} is not key=value")))?;
        let bad = |_| parse_err(i, format!("bad value for {key}: {value:?}"));
        match key {
            "n" => n = Some(value.parse::<usize>().map_err(bad)?),
            "m" => m = Some(value.parse::<usize>().map_err(bad)?),
            "delta" => delta = Some(value.parse::<f64>().map_err(|_| parse_err(i, "bad delta"))?),
            "seed" => seed = Some(value.parse::<u64>().map_err(bad)?),
            "kind" => {
                kind = Some(match value {
                    "cc" => DesignKind::ConstantColumn,
                    "bernoulli" => DesignKind::Bernoulli,
                    _ => return Err(parse_err(i, format!("unknown kind {value:?}"))),
                })
            }
            _ => return Err(parse_err(i, format!("unknown field {key:?}"))),
        }
    }
    let missing = |k: &str| parse_err(i, format!("missing field {k}"));
    let (n, m) = (n.ok_or_else(|| missing("n"))?, m.ok_or_else(|| missing("m"))?);
    let delta = delta.ok_or_else(|| missing("delta"))?;
    let kind = kind.ok_or_else(|| missing("kind"))?;
    let seed = seed.ok_or_else(|| missing("seed"))?;

    let mut item_tests = Vec::with_capacity(n);
    for x in 0..n {
        let (i, line) = next("item line")?;
        let (idx, rest) = line
            .split_once(':')
            .ok_or_else(|| parse_err(i, "item line lacks ':'"))?;
        if idx.trim().parse::<usize>().ok() != Some(x) {
            return Err(parse_err(i, format!("expected item {x}")));
        }
        let tests = rest
            .split_whitespace()
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| parse_err(i, format!("bad test index {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        item_tests.push(tests);
    }
    let design = PoolingDesign::from_item_tests(n, m, delta, item_tests, kind, seed)?;

    let (mut truth, mut displayed) = (None, None);
    for (i, line) in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        if let Some(b) = line.strip_prefix("true=") {
            truth = Some(parse_bits(i, b.trim_end(), m, Stage::True)?);
        } else if let Some(b) = line.strip_prefix("displayed=") {
            displayed = Some(parse_bits(i, b.trim_end(), m, Stage::Displayed)?);
        } else {
            return Err(parse_err(i, "unexpected trailing line"));
        }
    }
    Ok(DesignDump {
        design,
        truth,
        displayed,
    })
}
