//! Flat run-configuration files.
//!
//! One `key = value` per line; blank lines and lines starting with `#` are
//! ignored. Unknown or repeated keys are errors — a config file either means
//! exactly one thing or it is rejected. Values use the same forms as the CLI
//! flags; a preset's parameters apply wherever the file (and then the flags)
//! say nothing.
//!
//! ```text
//! # more uniforms, a fixed threshold
//! n_uniforms = 2500
//! r = 0.05
//! methods = NN1,NN25
//! seeds = 1..20
//! ```

use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::experiment::Method;

const KEYS: [&str; 7] = ["n_train", "n_test", "n_uniforms", "r", "methods", "seeds", "out"];

/// Optional overrides read from a config file. `None` fields defer to the
/// preset defaults.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunOverrides {
    pub n_train: Option<usize>,
    pub n_test: Option<usize>,
    pub n_uniforms: Option<usize>,
    pub r: Option<f64>,
    pub methods: Option<Vec<Method>>,
    pub seeds: Option<Vec<u64>>,
    pub out: Option<PathBuf>,
}

/// Parse a seed list: either an inclusive range `a..b` or a comma list.
pub fn parse_seeds(s: &str) -> Result<Vec<u64>> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once("..") {
        let lo: u64 = a
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("bad seed range start '{a}'")))?;
        let hi: u64 =
            b.trim().parse().map_err(|_| Error::Config(format!("bad seed range end '{b}'")))?;
        if hi < lo {
            return Err(Error::Config(format!("empty seed range '{s}'")));
        }
        return Ok((lo..=hi).collect());
    }
    s.split(',')
        .map(|part| {
            part.trim().parse().map_err(|_| Error::Config(format!("bad seed '{}'", part.trim())))
        })
        .collect()
}

/// Parse a comma-separated method list using the table row names.
pub fn parse_methods(s: &str) -> Result<Vec<Method>> {
    s.split(',').map(|part| Method::parse(part.trim())).collect()
}

/// Parse config file text.
pub fn parse_overrides(text: &str) -> Result<RunOverrides> {
    let mut out = RunOverrides::default();
    let mut seen: Vec<&str> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected 'key = value'", lineno + 1)))?;
        let key = key.trim();
        let value = value.trim();
        let known = KEYS.iter().find(|&&k| k == key).ok_or_else(|| {
            Error::Config(format!(
                "line {}: unknown key '{key}'; valid keys: {}",
                lineno + 1,
                KEYS.join(", ")
            ))
        })?;
        if seen.contains(known) {
            return Err(Error::Config(format!("line {}: key '{key}' repeated", lineno + 1)));
        }
        seen.push(known);

        let bad = |what: &str| Error::Config(format!("line {}: bad {what} '{value}'", lineno + 1));
        match key {
            "n_train" => out.n_train = Some(value.parse().map_err(|_| bad("n_train"))?),
            "n_test" => out.n_test = Some(value.parse().map_err(|_| bad("n_test"))?),
            "n_uniforms" => out.n_uniforms = Some(value.parse().map_err(|_| bad("n_uniforms"))?),
            "r" => out.r = Some(value.parse().map_err(|_| bad("r"))?),
            "methods" => out.methods = Some(parse_methods(value)?),
            "seeds" => out.seeds = Some(parse_seeds(value)?),
            "out" => out.out = Some(PathBuf::from(value)),
            _ => unreachable!("key checked against KEYS"),
        }
    }
    Ok(out)
}

/// Read and parse a config file.
pub fn load_overrides(path: &Path) -> Result<RunOverrides> {
    let text = std::fs::read_to_string(path)?;
    parse_overrides(&text)
}
