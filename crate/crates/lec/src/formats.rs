//! Line-oriented side files: technology profiles, arrival schedules and
//! input waves.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

use mcid_core::profile::ProfileError;
use mcid_core::sim::{SimError, WaveInput};
use mcid_core::{ArrivalSchedule, GateKind, TechnologyProfile};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: `{key}` given twice")]
    DuplicateKey { line: usize, key: String },
    #[error("missing key `{0}`")]
    MissingKey(&'static str),
    #[error("line {line}: unknown gate kind `{name}`")]
    UnknownKind { line: usize, name: String },
    #[error("line {line}: invalid value `{value}` for `{key}`")]
    InvalidValue {
        line: usize,
        key: String,
        value: String,
    },
    #[error(transparent)]
    Profile(#[from] ProfileError),
    #[error(transparent)]
    Wave(#[from] SimError),
}

/// `key = value` pairs with their line numbers; `#` starts a comment.
fn key_values(text: &str) -> Result<Vec<(usize, String, String)>, FormatError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| FormatError::Syntax {
            line: i + 1,
            message: "expected `key = value`".to_string(),
        })?;
        let k = k.trim();
        if k.is_empty() {
            return Err(FormatError::Syntax {
                line: i + 1,
                message: "empty key".to_string(),
            });
        }
        out.push((i + 1, k.to_string(), v.trim().to_string()));
    }
    Ok(out)
}

const PROFILE_KEYS: [&str; 6] = [
    "name",
    "default_fanout_limit",
    "splitter_fanout_limit",
    "non_clocked_kinds",
    "requires_path_balancing",
    "requires_fanout_check",
];

/// Parses a profile file; every key is required.
pub fn parse_profile(text: &str) -> Result<TechnologyProfile, FormatError> {
    let mut values: BTreeMap<&'static str, (usize, String)> = BTreeMap::new();
    for (line, k, v) in key_values(text)? {
        let key = *PROFILE_KEYS
            .iter()
            .find(|p| **p == k)
            .ok_or(FormatError::UnknownKey { line, key: k.clone() })?;
        if values.insert(key, (line, v)).is_some() {
            return Err(FormatError::DuplicateKey { line, key: k });
        }
    }
    let get = |key: &'static str| values.get(key).ok_or(FormatError::MissingKey(key));
    let invalid = |key: &str, line: usize, value: &str| FormatError::InvalidValue {
        line,
        key: key.to_string(),
        value: value.to_string(),
    };
    let limit = |key: &'static str| -> Result<u32, FormatError> {
        let (line, v) = get(key)?;
        v.parse().map_err(|_| invalid(key, *line, v))
    };
    let flag = |key: &'static str| -> Result<bool, FormatError> {
        let (line, v) = get(key)?;
        match v.as_str() {
            "true" => Ok(true),
            "false" => Ok(false),
            _ => Err(invalid(key, *line, v)),
        }
    };
    let (kinds_line, kinds_text) = get("non_clocked_kinds")?;
    let mut non_clocked_kinds = BTreeSet::new();
    for name in kinds_text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let kind = GateKind::from_name(name).ok_or_else(|| FormatError::UnknownKind {
            line: *kinds_line,
            name: name.to_string(),
        })?;
        non_clocked_kinds.insert(kind);
    }
    let profile = TechnologyProfile {
        name: get("name")?.1.clone(),
        default_fanout_limit: limit("default_fanout_limit")?,
        splitter_fanout_limit: limit("splitter_fanout_limit")?,
        non_clocked_kinds,
        requires_path_balancing: flag("requires_path_balancing")?,
        requires_fanout_check: flag("requires_fanout_check")?,
    };
    profile.validate()?;
    Ok(profile)
}

pub fn write_profile(p: &TechnologyProfile) -> String {
    let kinds: Vec<&str> = p.non_clocked_kinds.iter().map(|k| k.name()).collect();
    let mut out = String::new();
    let _ = writeln!(out, "name = {}", p.name);
    let _ = writeln!(out, "default_fanout_limit = {}", p.default_fanout_limit);
    let _ = writeln!(out, "splitter_fanout_limit = {}", p.splitter_fanout_limit);
    let _ = writeln!(out, "non_clocked_kinds = {}", kinds.join(", "));
    let _ = writeln!(out, "requires_path_balancing = {}", p.requires_path_balancing);
    let _ = writeln!(out, "requires_fanout_check = {}", p.requires_fanout_check);
    out
}

/// Parses `name = cycle` lines on top of `base`, so inputs not listed keep
/// their base arrival.
pub fn parse_arrivals(text: &str, base: ArrivalSchedule) -> Result<ArrivalSchedule, FormatError> {
    let mut sched = base;
    let mut seen = BTreeSet::new();
    for (line, k, v) in key_values(text)? {
        let cycle: u32 = v.parse().map_err(|_| FormatError::InvalidValue {
            line,
            key: k.clone(),
            value: v.clone(),
        })?;
        if !seen.insert(k.clone()) {
            return Err(FormatError::DuplicateKey { line, key: k });
        }
        sched.set(k, cycle);
    }
    Ok(sched)
}

pub fn write_arrivals(sched: &ArrivalSchedule) -> String {
    let mut out = String::new();
    for (name, cycle) in sched.iter() {
        let _ = writeln!(out, "{} = {}", name, cycle);
    }
    out
}

/// Parses a wave: one `name=bit` line per input, cycles separated by blank
/// lines. Every cycle must assign every input of `inputs`.
pub fn parse_wave(text: &str, inputs: Vec<String>) -> Result<WaveInput, FormatError> {
    let mut wave = WaveInput::new(inputs);
    let mut cycle: BTreeMap<String, bool> = BTreeMap::new();
    let mut flush = |cycle: &mut BTreeMap<String, bool>| -> Result<(), FormatError> {
        if !cycle.is_empty() {
            wave.push_named(cycle)?;
            cycle.clear();
        }
        Ok(())
    };
    for (i, raw) in text.lines().enumerate() {
        let trimmed = raw.trim();
        if trimmed.starts_with('#') {
            continue;
        }
        let line = trimmed.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            flush(&mut cycle)?;
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| FormatError::Syntax {
            line: i + 1,
            message: "expected `name=bit`".to_string(),
        })?;
        let (k, v) = (k.trim(), v.trim());
        let bit = match v {
            "0" => false,
            "1" => true,
            _ => {
                return Err(FormatError::InvalidValue {
                    line: i + 1,
                    key: k.to_string(),
                    value: v.to_string(),
                })
            }
        };
        if cycle.insert(k.to_string(), bit).is_some() {
            return Err(FormatError::DuplicateKey {
                line: i + 1,
                key: k.to_string(),
            });
        }
    }
    flush(&mut cycle)?;
    Ok(wave)
}

pub fn write_wave(wave: &WaveInput) -> String {
    let mut out = String::new();
    for t in 0..wave.len() {
        if t > 0 {
            out.push('\n');
        }
        for (name, &v) in wave.inputs().iter().zip(wave.cycle(t)) {
            let _ = writeln!(out, "{}={}", name, u8::from(v));
        }
    }
    out
}

/// Per-cycle output values as `CYCLE <t>: <po>=<bit> ...` lines.
pub fn write_outputs(names: &[String], values: &[Vec<bool>]) -> String {
    let mut out = String::new();
    for (t, row) in values.iter().enumerate() {
        let _ = write!(out, "CYCLE {}:", t);
        for (n, &v) in names.iter().zip(row) {
            let _ = write!(out, " {}={}", n, u8::from(v));
        }
        out.push('\n');
    }
    out
}
