//! Flat `key = value` configuration files.
//!
//! Blank lines and lines starting with `#` are ignored. Values may be quoted.
//! Keys use the long flag names with either `-` or `_`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

pub const KNOWN_KEYS: &[&str] = &[
    "kind",
    "p1",
    "phi",
    "phi_v",
    "alpha",
    "theta",
    "renormalize_shannon",
    "format",
    "out",
];

pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::usage(format!(
                "config line {}: expected 'key = value'",
                lineno + 1
            )));
        };
        let key = key.trim().replace('-', "_");
        if !KNOWN_KEYS.contains(&key.as_str()) {
            return Err(Error::usage(format!("config line {}: unknown key '{key}'", lineno + 1)));
        }
        let value = value.trim();
        let value = value
            .strip_prefix('"')
            .and_then(|v| v.strip_suffix('"'))
            .unwrap_or(value);
        map.insert(key, value.to_string());
    }
    Ok(map)
}

pub fn parse_bool(s: &str) -> Result<bool> {
    match s.trim().to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        other => Err(Error::usage(format!("'{other}' is not a boolean"))),
    }
}
