//! Run configuration: flags layered over an optional `key = value` file.

use std::fmt;
use std::str::FromStr;

use clap::ValueEnum;
use irrmeasure::exact::Poly;
use irrmeasure::rhin::{PrimePower, RhinFamily};
use irrmeasure::{Integer, Rational};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum UsageError {
    #[error("config line {line}: {msg}")]
    ConfigSyntax { line: usize, msg: String },
    #[error("unknown config key `{0}`")]
    UnknownKey(String),
    #[error("config key `{0}` given twice")]
    DuplicateKey(String),
    #[error("precision must be at least 20 digits, got {0}")]
    Precision(u32),
    #[error("invalid value `{value}` for {key}: {msg}")]
    Value { key: String, value: String, msg: String },
    #[error("missing value for {0}")]
    Missing(String),
    #[error("cannot read {path}: {msg}")]
    Io { path: String, msg: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        <Format as ValueEnum>::from_str(s, true)
    }
}

/// Inclusive range of `n`, written `7` or `2..9`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NRange {
    pub lo: u32,
    pub hi: u32,
}

impl NRange {
    pub fn single(n: u32) -> Self {
        NRange { lo: n, hi: n }
    }

    pub fn iter(self) -> impl Iterator<Item = u32> {
        self.lo..=self.hi
    }
}

impl FromStr for NRange {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        let parse = |t: &str| t.trim().parse::<u32>().map_err(|e| format!("{t}: {e}"));
        let r = match s.split_once("..") {
            Some((a, b)) => NRange { lo: parse(a)?, hi: parse(b.trim_start_matches('='))? },
            None => NRange::single(parse(s)?),
        };
        if r.lo > r.hi {
            return Err(format!("empty range {s}"));
        }
        Ok(r)
    }
}

impl fmt::Display for NRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lo == self.hi {
            write!(f, "{}", self.lo)
        } else {
            write!(f, "{}..{}", self.lo, self.hi)
        }
    }
}

const KEYS: &[&str] = &[
    "precision", "n", "format", "seed", "degree", "coeff-bound", "series", "terms", "a", "b", "c", "z", "points", "d",
    "delta", "factor", "prefactor",
];
const REPEATABLE: &[&str] = &["factor", "prefactor"];

/// Parsed config file, entries in file order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    entries: Vec<(String, String)>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, UsageError> {
        let mut entries: Vec<(String, String)> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split_once('#').map_or(raw, |(a, _)| a).trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| UsageError::ConfigSyntax { line: i + 1, msg: "expected key = value".into() })?;
            let (k, v) = (k.trim().to_string(), v.trim().to_string());
            if !KEYS.contains(&k.as_str()) {
                return Err(UsageError::UnknownKey(k));
            }
            if !REPEATABLE.contains(&k.as_str()) && entries.iter().any(|(e, _)| *e == k) {
                return Err(UsageError::DuplicateKey(k));
            }
            entries.push((k, v));
        }
        Ok(ConfigFile { entries })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn get_all<'a>(&'a self, key: &'a str) -> impl Iterator<Item = &'a str> + 'a {
        self.entries.iter().filter(move |(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn parsed<T: FromStr>(&self, key: &str) -> Result<Option<T>, UsageError>
    where
        T::Err: fmt::Display,
    {
        self.get(key).map(|v| parse_value(key, v)).transpose()
    }

    /// Numerator family from `points`, `d`, `delta`, `factor` and `prefactor`.
    pub fn rhin_family(&self) -> Result<RhinFamily, UsageError> {
        let need = |k: &str| self.get(k).ok_or_else(|| UsageError::Missing(k.into()));
        let points = need("points")?
            .split(',')
            .map(|p| parse_rational("points", p))
            .collect::<Result<Vec<_>, _>>()?;
        let d: Integer = parse_value("d", need("d")?)?;
        let delta: Integer = parse_value("delta", need("delta")?)?;
        let mut factors = Vec::new();
        for f in self.get_all("factor") {
            let bad = |msg: &str| UsageError::Value { key: "factor".into(), value: f.into(), msg: msg.into() };
            let (coeffs, rate) = f.split_once('@').ok_or_else(|| bad("expected `c0 c1 ... @ rate`"))?;
            let coeffs =
                coeffs.split_whitespace().map(|c| parse_rational("factor", c)).collect::<Result<Vec<_>, _>>()?;
            if coeffs.len() < 2 {
                return Err(bad("a factor needs degree at least 1"));
            }
            factors.push((Poly::new(coeffs), parse_rational("factor", rate)?));
        }
        if factors.is_empty() {
            return Err(UsageError::Missing("factor".into()));
        }
        let mut prefactor = Vec::new();
        for p in self.get_all("prefactor") {
            let parts: Vec<&str> = p.split_whitespace().collect();
            if parts.len() != 3 {
                return Err(UsageError::Value {
                    key: "prefactor".into(),
                    value: p.into(),
                    msg: "expected `base rate offset`".into(),
                });
            }
            prefactor.push(PrimePower {
                base: parse_value("prefactor", parts[0])?,
                rate: parse_rational("prefactor", parts[1])?,
                offset: parse_value("prefactor", parts[2])?,
            });
        }
        Ok(RhinFamily { points, d, delta, prefactor, factors })
    }
}

pub fn parse_value<T: FromStr>(key: &str, v: &str) -> Result<T, UsageError>
where
    T::Err: fmt::Display,
{
    v.trim().parse().map_err(|e: T::Err| UsageError::Value { key: key.into(), value: v.into(), msg: e.to_string() })
}

/// `p/q`, an integer, or a terminating decimal, exactly.
pub fn parse_rational(key: &str, v: &str) -> Result<Rational, UsageError> {
    let t = v.trim();
    let bad = || UsageError::Value { key: key.into(), value: v.into(), msg: "not a rational number".into() };
    if let Some((int, frac)) = t.split_once('.') {
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let num: Integer = format!("{int}{frac}").parse().map_err(|_| bad())?;
        let den = Integer::from(Integer::u_pow_u(10, frac.len() as u32));
        return Ok(Rational::from((num, den)));
    }
    t.parse::<Rational>().map_err(|_| bad())
}

/// Flags as given on the command line (all optional).
#[derive(Debug, Clone, Default)]
pub struct Flags {
    pub precision: Option<u32>,
    pub n: Option<NRange>,
    pub format: Option<Format>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub precision: u32,
    pub n: Option<NRange>,
    pub format: Format,
    pub seed: u64,
    pub file: ConfigFile,
}

pub const DEFAULT_PRECISION: u32 = 30;
pub const DEFAULT_SEED: u64 = 20040514;

impl RunConfig {
    /// Flags win over file entries, which win over defaults.
    pub fn resolve(flags: Flags, file: ConfigFile) -> Result<Self, UsageError> {
        let precision = match flags.precision {
            Some(p) => p,
            None => file.parsed("precision")?.unwrap_or(DEFAULT_PRECISION),
        };
        if precision < 20 {
            return Err(UsageError::Precision(precision));
        }
        let n = match flags.n {
            Some(n) => Some(n),
            None => file.parsed("n")?,
        };
        let format = match flags.format {
            Some(f) => f,
            None => file.parsed("format")?.unwrap_or(Format::Human),
        };
        let seed = match flags.seed {
            Some(s) => s,
            None => file.parsed("seed")?.unwrap_or(DEFAULT_SEED),
        };
        Ok(RunConfig { precision, n, format, seed, file })
    }

    pub fn n_or(&self, default: NRange) -> NRange {
        self.n.unwrap_or(default)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_file() {
        let f = ConfigFile::parse("# comment\nprecision = 40\n\nfactor = -1 1 @ 0.5 # trailing\nfactor = -2 1 @ 1/2\n")
            .unwrap();
        assert_eq!(f.get("precision"), Some("40"));
        assert_eq!(f.get_all("factor").count(), 2);
        assert_eq!(ConfigFile::parse("colour = red"), Err(UsageError::UnknownKey("colour".into())));
        assert_eq!(ConfigFile::parse("seed = 1\nseed = 2"), Err(UsageError::DuplicateKey("seed".into())));
        assert!(matches!(ConfigFile::parse("seed"), Err(UsageError::ConfigSyntax { line: 1, .. })));
    }

    #[test]
    fn flags_override_file() {
        let file = ConfigFile::parse("precision = 50\nseed = 3").unwrap();
        let flags = Flags { precision: Some(25), ..Flags::default() };
        let rc = RunConfig::resolve(flags, file).unwrap();
        assert_eq!((rc.precision, rc.seed), (25, 3));
        let low = Flags { precision: Some(10), ..Flags::default() };
        assert_eq!(RunConfig::resolve(low, ConfigFile::default()), Err(UsageError::Precision(10)));
    }

    #[test]
    fn ranges_and_rationals() {
        assert_eq!("3".parse::<NRange>().unwrap(), NRange::single(3));
        assert_eq!("2..9".parse::<NRange>().unwrap(), NRange { lo: 2, hi: 9 });
        assert!("9..2".parse::<NRange>().is_err());
        assert_eq!(parse_rational("x", "0.704324").unwrap(), Rational::from((176081, 250000)));
        assert_eq!(parse_rational("x", "-4/3").unwrap(), Rational::from((-4, 3)));
    }

    #[test]
    fn custom_family_matches_builtin() {
        let text = "points = 2\nd = 1\ndelta = 2\nfactor = -1 1 @ 1\nfactor = -2 1 @ 1\n";
        let fam = ConfigFile::parse(text).unwrap().rhin_family().unwrap();
        assert_eq!(fam, RhinFamily::log2_simple());
    }
}
