//! Flat `key = value` experiment configuration.
//!
//! ```text
//! # cubic on an integer range
//! phi = [0, 0, 0, 1]
//! generator = arithmetic
//! start = 1
//! step = 1
//! n = [8, 16, 32]
//! seed = 7
//! ```
//!
//! Keys: `phi`, `generator` (`arithmetic`, `geometric`, `random-integer`,
//! `symmetric`, `explicit`), `start`, `step`, `first`, `ratio`, `low`,
//! `high`, `values`, `values_file`, `n`, `s`, `t`, `seed`, `accounting`,
//! `family` (`strict` or `relaxed`), `allow_large`, `s_dim`, `eps`,
//! `output`, `format` (`csv` or `json`).

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use crate::curves::FamilyMode;
use crate::error::{Error, Result};
use crate::exact::{int, parse_scalar, parse_scalar_list, Scalar, UniPoly};

use super::Generator;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub phi: UniPoly,
    pub generator: Generator,
    /// Strictly increasing sizes.
    pub ns: Vec<usize>,
    pub s: u64,
    /// Forced segment count; chosen from `|D|` when absent.
    pub t: Option<usize>,
    pub seed: u64,
    pub accounting: bool,
    pub family: FamilyMode,
    /// Lifts the desk-scale guardrails.
    pub allow_large: bool,
    pub s_dim: u32,
    pub eps: f64,
    pub output: Option<PathBuf>,
    pub format: OutputFormat,
}

/// `8 deg(phi) + 1`.
pub fn default_s(phi: &UniPoly) -> u64 {
    8 * phi.degree().unwrap_or(0) as u64 + 1
}

impl ExperimentConfig {
    /// Defaults around `phi`, `generator` and `ns`.
    pub fn new(phi: UniPoly, generator: Generator, ns: Vec<usize>) -> Result<Self> {
        let cfg = Self {
            s: default_s(&phi),
            phi,
            generator,
            ns,
            t: None,
            seed: 0,
            accounting: true,
            family: FamilyMode::Strict,
            allow_large: false,
            s_dim: 4,
            eps: 0.0,
            output: None,
            format: OutputFormat::Csv,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        match self.phi.degree() {
            Some(d) if d >= 3 => {}
            Some(d) => return Err(Error::DegreeTooLow(d)),
            None => return Err(Error::ZeroPolynomial),
        }
        if self.ns.is_empty() {
            return Err(Error::Config("n must list at least one size".into()));
        }
        if self.ns[0] == 0 || self.ns.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Config(format!(
                "n values must be positive and strictly increasing, got {:?}",
                self.ns
            )));
        }
        if self.s == 0 {
            return Err(Error::Config("s must be at least 1".into()));
        }
        if self.t == Some(0) {
            return Err(Error::Config("t must be at least 1".into()));
        }
        if self.s_dim < 2 {
            return Err(Error::Config("s_dim must be at least 2".into()));
        }
        if self.eps.is_nan() || self.eps < 0.0 {
            return Err(Error::Config("eps must be non-negative".into()));
        }
        Ok(())
    }
}

fn parse_entries(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`", no + 1)))?;
        let key = key.trim().to_string();
        if out.insert(key.clone(), value.trim().to_string()).is_some() {
            return Err(Error::Config(format!("line {}: duplicate key `{key}`", no + 1)));
        }
    }
    Ok(out)
}

struct Entries(BTreeMap<String, String>);

impl Entries {
    fn take(&mut self, key: &str) -> Option<String> {
        self.0.remove(key)
    }

    fn scalar(&mut self, key: &str) -> Result<Option<Scalar>> {
        self.take(key).map(|v| parse_scalar(&v)).transpose()
    }

    fn parsed<T: std::str::FromStr>(&mut self, key: &str) -> Result<Option<T>> {
        self.take(key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|_| Error::Config(format!("bad value for `{key}`: {v:?}")))
            })
            .transpose()
    }

    fn required<T>(&mut self, key: &str, v: Option<T>) -> Result<T> {
        v.ok_or_else(|| Error::Config(format!("missing key `{key}`")))
    }
}

fn parse_usize_list(text: &str) -> Result<Vec<usize>> {
    let inner = text.trim().trim_start_matches('[').trim_end_matches(']');
    inner
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| Error::Config(format!("bad size {s:?} in n")))
        })
        .collect()
}

/// Parses configuration text; relative `values_file` paths resolve against
/// `base`.
pub fn parse_config(text: &str, base: Option<&Path>) -> Result<ExperimentConfig> {
    let mut e = Entries(parse_entries(text)?);
    let phi_text = e.take("phi");
    let phi = UniPoly::new(parse_scalar_list(&e.required("phi", phi_text)?)?);
    let kind_text = e.take("generator");
    let kind = e.required("generator", kind_text)?;
    let generator = match kind.as_str() {
        "arithmetic" => Generator::Arithmetic {
            start: e.scalar("start")?.unwrap_or_else(|| int(1)),
            step: e.scalar("step")?.unwrap_or_else(|| int(1)),
        },
        "geometric" => Generator::Geometric {
            first: e.scalar("first")?.unwrap_or_else(|| int(1)),
            ratio: e.scalar("ratio")?.unwrap_or_else(|| int(2)),
        },
        "random-integer" => {
            let low = e.parsed("low")?;
            let high = e.parsed("high")?;
            Generator::RandomInteger {
                low: e.required("low", low)?,
                high: e.required("high", high)?,
            }
        }
        "symmetric" => Generator::Symmetric,
        "explicit" | "explicit-file" => {
            let values = match (e.take("values"), e.take("values_file")) {
                (Some(v), None) => parse_scalar_list(&v)?,
                (None, Some(path)) => {
                    let path = match base {
                        Some(b) if Path::new(&path).is_relative() => b.join(path),
                        _ => PathBuf::from(path),
                    };
                    let body = fs::read_to_string(&path)?;
                    body.split(|c: char| c == ',' || c.is_whitespace() || c == '[' || c == ']')
                        .filter(|s| !s.is_empty())
                        .map(parse_scalar)
                        .collect::<Result<Vec<_>>>()?
                }
                _ => {
                    return Err(Error::Config(
                        "explicit generator needs exactly one of `values`, `values_file`".into(),
                    ))
                }
            };
            Generator::Explicit(values)
        }
        other => return Err(Error::Config(format!("unknown generator `{other}`"))),
    };
    let ns = match (e.take("n"), &generator) {
        (Some(v), _) => parse_usize_list(&v)?,
        (None, Generator::Explicit(values)) => vec![values.len()],
        (None, _) => return Err(Error::Config("missing key `n`".into())),
    };
    let mut cfg = ExperimentConfig::new(phi, generator, ns)?;
    if let Some(s) = e.parsed("s")? {
        cfg.s = s;
    }
    cfg.t = e.parsed("t")?;
    if let Some(seed) = e.parsed("seed")? {
        cfg.seed = seed;
    }
    if let Some(a) = e.parsed("accounting")? {
        cfg.accounting = a;
    }
    if let Some(a) = e.parsed("allow_large")? {
        cfg.allow_large = a;
    }
    if let Some(f) = e.take("family") {
        cfg.family = match f.as_str() {
            "strict" => FamilyMode::Strict,
            "relaxed" => FamilyMode::Relaxed,
            other => return Err(Error::Config(format!("unknown family mode `{other}`"))),
        };
    }
    if let Some(d) = e.parsed("s_dim")? {
        cfg.s_dim = d;
    }
    if let Some(eps) = e.parsed("eps")? {
        cfg.eps = eps;
    }
    cfg.output = e.take("output").map(PathBuf::from);
    if let Some(f) = e.take("format") {
        cfg.format = match f.as_str() {
            "csv" => OutputFormat::Csv,
            "json" => OutputFormat::Json,
            other => return Err(Error::Config(format!("unknown format `{other}`"))),
        };
    }
    if let Some(key) = e.0.keys().next() {
        return Err(Error::Config(format!("unknown key `{key}`")));
    }
    cfg.validate()?;
    Ok(cfg)
}

pub fn load_config(path: &Path) -> Result<ExperimentConfig> {
    let text = fs::read_to_string(path)?;
    parse_config(&text, path.parent())
}
