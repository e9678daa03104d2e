//! Flag and config-file resolution. A config file holds `key=value` lines
//! named like the long flags; flags win.

use std::collections::HashMap;
use std::ops::RangeInclusive;

use isoverify::exact::rational::parse_rational;
use isoverify::exact::{parse_real, Rational, RealSpec};
use isoverify::funcspec::{parse_function, ApproxFunction};
use isoverify::isolation::Budget;
use isoverify::{Error, ParseError};

use crate::Output;

/// Environment variable overriding refinement limits:
/// `<refinement cap>` or `<refinement cap>:<max precision bits>`.
pub const BUDGET_VAR: &str = "ISOVERIFY_BUDGET";

#[derive(Debug, Default, Clone)]
pub struct Config {
    values: HashMap<String, String>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Self, Error> {
        let mut values = HashMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(Error::Parse(ParseError::new(
                    line,
                    line.len(),
                    format!("line {}: expected key=value", i + 1),
                )));
            };
            values.insert(k.trim().replace('_', "-"), v.trim().to_string());
        }
        Ok(Config { values })
    }

    pub fn load(path: &str) -> Result<Self, Error> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Precondition(format!("cannot read {path}: {e}")))?;
        Self::parse(&text)
    }

    /// Layers `self` over `base`.
    pub fn over(mut self, base: &Config) -> Config {
        for (k, v) in &base.values {
            self.values.entry(k.clone()).or_insert_with(|| v.clone());
        }
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }
}

/// A flag value, falling back to the config file.
pub struct Resolver<'a> {
    pub config: &'a Config,
}

impl Resolver<'_> {
    pub fn raw(&self, flag: &Option<String>, key: &str) -> Option<String> {
        flag.clone()
            .or_else(|| self.config.get(key).map(str::to_string))
    }

    pub fn required(&self, flag: &Option<String>, key: &str) -> Result<String, Error> {
        self.raw(flag, key)
            .ok_or_else(|| Error::Precondition(format!("--{key} is required")))
    }

    pub fn alpha(&self, flag: &Option<String>) -> Result<RealSpec, Error> {
        Ok(parse_real(&self.required(flag, "alpha")?)?)
    }

    pub fn function(&self, flag: &Option<String>) -> Result<ApproxFunction, Error> {
        Ok(parse_function(&self.required(flag, "f")?)?)
    }

    pub fn rational(
        &self,
        flag: &Option<String>,
        key: &str,
        default: &str,
    ) -> Result<Rational, Error> {
        let text = self.raw(flag, key).unwrap_or_else(|| default.to_string());
        Ok(parse_rational(&text)?)
    }

    pub fn number<T: std::str::FromStr>(
        &self,
        flag: &Option<String>,
        key: &str,
        default: Option<T>,
    ) -> Result<T, Error> {
        match self.raw(flag, key) {
            Some(text) => text.trim().parse().map_err(|_| {
                Error::Parse(ParseError::new(
                    &text,
                    0,
                    format!("--{key} expects a nonnegative integer"),
                ))
            }),
            None => default.ok_or_else(|| Error::Precondition(format!("--{key} is required"))),
        }
    }

    pub fn output(&self, flag: &Option<Output>) -> Result<Output, Error> {
        if let Some(o) = flag {
            return Ok(*o);
        }
        match self.config.get("output") {
            None | Some("table") => Ok(Output::Table),
            Some("json") => Ok(Output::Json),
            Some("csv") => Ok(Output::Csv),
            Some(other) => Err(Error::Parse(ParseError::new(
                other,
                0,
                "output is table, json or csv",
            ))),
        }
    }
}

/// `a..b` (inclusive) or a single index `b`, read as `0..b`.
pub fn parse_range(text: &str) -> Result<RangeInclusive<usize>, Error> {
    let bad = |offset: usize, msg: &str| Error::Parse(ParseError::new(text, offset, msg));
    let num = |s: &str, offset: usize| {
        s.trim()
            .parse::<usize>()
            .map_err(|_| bad(offset, "expected a nonnegative integer"))
    };
    match text.split_once("..") {
        Some((a, b)) => {
            let b = b.strip_prefix('=').unwrap_or(b);
            let lo = num(a, 0)?;
            let hi = num(b, a.len() + 2)?;
            if lo > hi {
                return Err(bad(0, "empty range"));
            }
            Ok(lo..=hi)
        }
        None => Ok(0..=num(text, 0)?),
    }
}

pub fn budget_from_env() -> Result<Budget, Error> {
    let Ok(text) = std::env::var(BUDGET_VAR) else {
        return Ok(Budget::default());
    };
    let bad = || {
        Error::Parse(ParseError::new(
            &text,
            0,
            format!("{BUDGET_VAR} is <cap> or <cap>:<bits>"),
        ))
    };
    let mut b = Budget::default();
    let (cap, bits) = match text.split_once(':') {
        Some((c, p)) => (c, Some(p)),
        None => (text.as_str(), None),
    };
    b.refinement_cap = cap.trim().parse().map_err(|_| bad())?;
    if let Some(p) = bits {
        b.max_precision_bits = p.trim().parse().map_err(|_| bad())?;
    }
    if b.refinement_cap == 0 || b.max_precision_bits < 64 {
        return Err(bad());
    }
    Ok(b)
}
