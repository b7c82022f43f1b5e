//! `key = value` run configuration.

use powser::mellin::ZeroFreeRegionSpec;
use powser::{Error, Result};
use rug::ops::Pow;
use rug::Rational;
use serde_json::{json, Value};
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub precision_bits: u32,
    pub tolerance: f64,
    pub memory_cap: u64,
    pub output_dir: Option<PathBuf>,
    pub region: ZeroFreeRegionSpec,
    pub theta_min_deg: f64,
    pub allow_unsafe_height: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            precision_bits: 128,
            tolerance: 1e-20,
            memory_cap: powser::arith::SieveConfig::DEFAULT_MEMORY_CAP,
            output_dir: None,
            region: ZeroFreeRegionSpec::default(),
            theta_min_deg: 5.0,
            allow_unsafe_height: false,
        }
    }
}

const KEYS: &[&str] = &[
    "precision_bits",
    "tolerance",
    "memory_cap",
    "output_dir",
    "alpha",
    "beta",
    "b",
    "w",
    "theta_min_deg",
    "allow_unsafe_height",
];

/// Exact rational from `p/q`, an integer, or a decimal such as `0.0203` or `1e-3`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::InvalidArgument(format!("'{s}' is not a rational number"));
    if let Some((a, b)) = s.split_once('/') {
        let a: rug::Integer = a.trim().parse().map_err(|_| bad())?;
        let b: rug::Integer = b.trim().parse().map_err(|_| bad())?;
        if b == 0 {
            return Err(bad());
        }
        return Ok(Rational::from((a, b)));
    }
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (int, frac) = mant.split_once('.').unwrap_or((mant, ""));
    if int.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    let digits = format!("{int}{frac}");
    if !digits.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let mut r = Rational::from(digits.parse::<rug::Integer>().map_err(|_| bad())?);
    let shift = exp - frac.len() as i32;
    let ten = rug::Integer::from(10).pow(shift.unsigned_abs());
    if shift >= 0 {
        r *= ten;
    } else {
        r /= ten;
    }
    if neg {
        r = -r;
    }
    Ok(r)
}

fn parse_bool(s: &str) -> Option<bool> {
    match s {
        "true" | "yes" | "1" => Some(true),
        "false" | "no" | "0" => Some(false),
        _ => None,
    }
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidArgument(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut c = RunConfig::default();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::InvalidArgument(format!("config line {line_no}: expected 'key = value'")))?;
            let key = key.trim();
            let value = value.trim();
            let err = |what: &str| Error::InvalidArgument(format!("config line {line_no}: {what} for '{key}'"));
            match key {
                "precision_bits" => c.precision_bits = value.parse().map_err(|_| err("expected an integer"))?,
                "tolerance" => c.tolerance = value.parse().map_err(|_| err("expected a number"))?,
                "memory_cap" => c.memory_cap = value.parse().map_err(|_| err("expected an integer"))?,
                "output_dir" => c.output_dir = Some(PathBuf::from(value)),
                "alpha" => c.region.alpha = parse_rational(value).map_err(|_| err("expected a rational"))?,
                "beta" => c.region.beta = parse_rational(value).map_err(|_| err("expected a rational"))?,
                "b" => c.region.b = parse_rational(value).map_err(|_| err("expected a rational"))?,
                "w" => c.region.w = parse_rational(value).map_err(|_| err("expected a rational"))?,
                "theta_min_deg" => c.theta_min_deg = value.parse().map_err(|_| err("expected a number"))?,
                "allow_unsafe_height" => {
                    c.allow_unsafe_height = parse_bool(value).ok_or_else(|| err("expected true or false"))?
                }
                _ => {
                    return Err(Error::InvalidArgument(format!(
                        "config line {line_no}: unknown key '{key}' (known: {})",
                        KEYS.join(", ")
                    )))
                }
            }
        }
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        powser::hpnum::PrecisionContext::new(self.precision_bits)?;
        if !(self.tolerance > 0.0) {
            return Err(Error::InvalidArgument("tolerance must be positive".into()));
        }
        if self.memory_cap == 0 {
            return Err(Error::InvalidArgument("memory_cap must be positive".into()));
        }
        if !(self.theta_min_deg > 0.0 && self.theta_min_deg < 90.0) {
            return Err(Error::InvalidArgument("theta_min_deg must lie in (0, 90)".into()));
        }
        self.region.validate()
    }

    pub fn resolve(&self, path: &Path) -> PathBuf {
        match &self.output_dir {
            Some(d) if path.is_relative() => d.join(path),
            _ => path.to_path_buf(),
        }
    }

    pub fn echo(&self) -> Value {
        json!({
            "precision_bits": self.precision_bits,
            "tolerance": self.tolerance,
            "memory_cap": self.memory_cap,
            "output_dir": self.output_dir.as_ref().map(|p| p.display().to_string()),
            "alpha": self.region.alpha.to_string(),
            "beta": self.region.beta.to_string(),
            "b": self.region.b.to_string(),
            "w": self.region.w.to_string(),
            "theta_min_deg": self.theta_min_deg,
            "allow_unsafe_height": self.allow_unsafe_height,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_keys_and_comments() {
        let c = RunConfig::parse("# run\nprecision_bits = 256\nb = 0.0203 # default\nalpha = 2/3\n\nallow_unsafe_height = true\n")
            .unwrap();
        assert_eq!(c.precision_bits, 256);
        assert_eq!(c.region.b, Rational::from((203, 10000)));
        assert_eq!(c.region.alpha, Rational::from((2, 3)));
        assert!(c.allow_unsafe_height);
    }

    #[test]
    fn unknown_key_reports_line() {
        let e = RunConfig::parse("precision_bits = 128\n\nbogus = 1\n").unwrap_err();
        assert!(e.to_string().contains("line 3"), "{e}");
    }

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("1e-3").unwrap(), Rational::from((1, 1000)));
        assert_eq!(parse_rational("-2.5").unwrap(), Rational::from((-5, 2)));
        assert_eq!(parse_rational("16").unwrap(), Rational::from(16));
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1/0").is_err());
    }
}
