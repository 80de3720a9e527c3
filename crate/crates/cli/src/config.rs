//! Optional TOML config. Every key mirrors a command-line flag; flags win.

use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::Deserialize;

/// A list of values: `0.5`, `[0, 0.5, 0.9]`, or a range string
/// `"a:b:n"` (linear) / `"a:b:n:log"`, comma-separable.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Values {
    One(f64),
    Many(Vec<f64>),
    Text(String),
}

impl Values {
    pub fn resolve(&self) -> Result<Vec<f64>> {
        match self {
            Values::One(x) => Ok(vec![*x]),
            Values::Many(v) => Ok(v.clone()),
            Values::Text(s) => parse_values(s),
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub tmin: Option<f64>,
    pub tmax: Option<f64>,
    pub tpts: Option<usize>,
    pub rel_tol: Option<f64>,
    pub abs_tol: Option<f64>,
    pub jobs: Option<usize>,
    pub parts: Option<Vec<String>>,
    pub omega0: Option<Values>,
    #[serde(rename = "Omega0")]
    pub plasma: Option<Values>,
    pub omegap: Option<Values>,
    #[serde(rename = "L")]
    pub thickness: Option<Values>,
}

impl Config {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }
}

/// Comma-separated items, each a number or a range `a:b:n[:log]`.
pub fn parse_values(s: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for item in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
        let f: Vec<&str> = item.split(':').collect();
        match f.as_slice() {
            [x] => out.push(num(x)?),
            [a, b, n] | [a, b, n, "lin"] => out.extend(linspace(num(a)?, num(b)?, count(n)?)),
            [a, b, n, "log"] => out.extend(logspace(num(a)?, num(b)?, count(n)?)?),
            _ => bail!("bad value list item '{item}' (expected x, a:b:n or a:b:n:log)"),
        }
    }
    if out.is_empty() {
        bail!("empty value list '{s}'");
    }
    Ok(out)
}

fn num(s: &str) -> Result<f64> {
    let x: f64 = s
        .trim()
        .parse()
        .with_context(|| format!("'{s}' is not a number"))?;
    if !x.is_finite() {
        bail!("'{s}' is not finite");
    }
    Ok(x)
}

fn count(s: &str) -> Result<usize> {
    let n: usize = s
        .trim()
        .parse()
        .with_context(|| format!("'{s}' is not a point count"))?;
    if n == 0 {
        bail!("point count must be positive");
    }
    Ok(n)
}

pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    (0..n)
        .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
        .collect()
}

pub fn logspace(a: f64, b: f64, n: usize) -> Result<Vec<f64>> {
    if !(a > 0.0 && b > 0.0) {
        bail!("log spacing needs positive ends, got {a} and {b}");
    }
    if n == 1 {
        return Ok(vec![a]);
    }
    let (la, lb) = (a.ln(), b.ln());
    // pin the ends so they print exactly as given
    Ok((0..n)
        .map(|i| match i {
            0 => a,
            i if i == n - 1 => b,
            i => (la + (lb - la) * i as f64 / (n - 1) as f64).exp(),
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn value_lists() {
        assert_eq!(parse_values("0.5").unwrap(), vec![0.5]);
        assert_eq!(parse_values("0,1:2:3").unwrap(), vec![0.0, 1.0, 1.5, 2.0]);
        let v = parse_values("1:100:3:log").unwrap();
        assert_eq!(v[0], 1.0);
        assert!((v[1] - 10.0).abs() < 1e-12);
        assert_eq!(v[2], 100.0);
        assert!(parse_values("").is_err());
        assert!(parse_values("1:2").is_err());
        assert!(parse_values("0:1:3:log").is_err());
        assert!(parse_values("x").is_err());
    }

    #[test]
    fn config_keys() {
        let c: Config = toml::from_str(
            "tmin = 0.1\nomega0 = \"0:1:3\"\nOmega0 = 2.0\nL = [1, 2]\nparts = [\"TE\"]",
        )
        .unwrap();
        assert_eq!(c.tmin, Some(0.1));
        assert_eq!(c.omega0.unwrap().resolve().unwrap(), vec![0.0, 0.5, 1.0]);
        assert_eq!(c.plasma.unwrap().resolve().unwrap(), vec![2.0]);
        assert_eq!(c.thickness.unwrap().resolve().unwrap(), vec![1.0, 2.0]);
        assert!(toml::from_str::<Config>("bogus = 1").is_err());
    }
}
