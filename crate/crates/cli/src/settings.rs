//! Tolerances, grid strings and `key = value` config files.

use std::collections::BTreeMap;
use std::path::Path;

use geohh::Tolerance;

use crate::failure::Failure;

pub const ENV_REL_TOL: &str = "GEOHH_REL_TOL";
pub const ENV_ABS_TOL: &str = "GEOHH_ABS_TOL";

fn env_f64(name: &str) -> Result<Option<f64>, Failure> {
    match std::env::var(name) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Failure::usage(format!("{name}: not a number: {v:?}"))),
        Err(_) => Ok(None),
    }
}

/// Flag, then environment, then the library default.
pub fn tolerance(
    rel: Option<f64>,
    abs: Option<f64>,
    max_panels: Option<usize>,
) -> Result<Tolerance, Failure> {
    let d = Tolerance::default();
    let rel = match rel {
        Some(v) => v,
        None => env_f64(ENV_REL_TOL)?.unwrap_or(d.rel_tol),
    };
    let abs = match abs {
        Some(v) => v,
        None => env_f64(ENV_ABS_TOL)?.unwrap_or(d.abs_tol),
    };
    let mut tol = Tolerance::new(rel, abs)?;
    if let Some(n) = max_panels {
        if n == 0 {
            return Err(Failure::usage("max_panels must be positive"));
        }
        tol.max_panels = n;
    }
    Ok(tol)
}

pub fn parse_f64(key: &str, text: &str) -> Result<f64, Failure> {
    let v: f64 = text
        .trim()
        .parse()
        .map_err(|_| Failure::usage(format!("{key}: not a number: {text:?}")))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Failure::usage(format!("{key}: not finite: {text:?}")))
    }
}

/// `v1,v2,...` or `start:end:count` (inclusive, evenly spaced).
pub fn parse_grid(key: &str, text: &str) -> Result<Vec<f64>, Failure> {
    let text = text.trim();
    if text.is_empty() {
        return Err(Failure::usage(format!("grid `{key}` is empty")));
    }
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        [_] => text.split(',').map(|p| parse_f64(key, p)).collect(),
        [start, end, count] => {
            let (start, end) = (parse_f64(key, start)?, parse_f64(key, end)?);
            let count: usize = count
                .trim()
                .parse()
                .map_err(|_| Failure::usage(format!("{key}: bad count in {text:?}")))?;
            match count {
                0 => Err(Failure::usage(format!("grid `{key}` is empty"))),
                1 => Ok(vec![start]),
                n => Ok((0..n)
                    .map(|i| {
                        if i == n - 1 {
                            end
                        } else {
                            start + (end - start) * i as f64 / (n - 1) as f64
                        }
                    })
                    .collect()),
            }
        }
        _ => Err(Failure::usage(format!(
            "{key}: expected a comma list or start:end:count, got {text:?}"
        ))),
    }
}

/// Keys accepted in sweep config files.
pub const SWEEP_KEYS: &[&str] = &[
    "f",
    "a",
    "b",
    "s",
    "q",
    "theorem",
    "side",
    "variant",
    "tie_s",
    "upper_only",
    "check_hypothesis",
    "samples",
    "sequential",
    "format",
    "out",
    "rel_tol",
    "abs_tol",
    "max_panels",
];

/// Parses `key = value` lines; `#` starts a comment, dashes in keys read as
/// underscores.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>, Failure> {
    let mut map = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            Failure::usage(format!("config line {}: expected key = value", n + 1))
        })?;
        let key = k.trim().replace('-', "_");
        if !SWEEP_KEYS.contains(&key.as_str()) {
            return Err(Failure::usage(format!(
                "config line {}: unknown key `{key}`",
                n + 1
            )));
        }
        if map.insert(key.clone(), v.trim().to_string()).is_some() {
            return Err(Failure::usage(format!(
                "config line {}: duplicate key `{key}`",
                n + 1
            )));
        }
    }
    Ok(map)
}

pub fn read_config(path: &Path) -> Result<BTreeMap<String, String>, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read config {}: {e}", path.display())))?;
    parse_config(&text)
}

pub fn parse_bool(key: &str, text: &str) -> Result<bool, Failure> {
    match text.trim() {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        other => Err(Failure::usage(format!(
            "{key}: expected true or false, got {other:?}"
        ))),
    }
}
