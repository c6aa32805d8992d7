//! Run configuration: a `key = value` file, then flag overrides, then `SRLAB_SEED`.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::datum::Case;
use crate::field::{FieldCfg, FieldMode};
use crate::scalar::parse_quad;
use crate::Quad;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SuiteName {
    Scalars,
    Roots,
    Folding,
    Field,
    Groups,
    Appendix,
    ValuationAxioms,
    Embedding,
    Moufang,
}

impl SuiteName {
    pub const ALL: [SuiteName; 9] = [
        SuiteName::Scalars,
        SuiteName::Roots,
        SuiteName::Folding,
        SuiteName::Field,
        SuiteName::Groups,
        SuiteName::Appendix,
        SuiteName::ValuationAxioms,
        SuiteName::Embedding,
        SuiteName::Moufang,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SuiteName::Scalars => "scalars",
            SuiteName::Roots => "roots",
            SuiteName::Folding => "folding",
            SuiteName::Field => "field",
            SuiteName::Groups => "groups",
            SuiteName::Appendix => "appendix",
            SuiteName::ValuationAxioms => "valuation-axioms",
            SuiteName::Embedding => "embedding",
            SuiteName::Moufang => "moufang",
        }
    }
}

impl fmt::Display for SuiteName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SuiteName {
    type Err = ConfigError;
    fn from_str(s: &str) -> Result<Self, ConfigError> {
        SuiteName::ALL
            .into_iter()
            .find(|n| n.as_str() == s.trim())
            .ok_or_else(|| ConfigError::Value("suites".into(), s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("line {0}: expected key = value")]
    Syntax(usize),
    #[error("unknown key {0:?}")]
    UnknownKey(String),
    #[error("bad value for {0}: {1:?}")]
    Value(String, String),
    #[error("{0}")]
    Invalid(String),
    #[error("cannot read {0}: {1}")]
    Io(String, String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub case: Case,
    pub field: FieldCfg,
    pub suites: Vec<SuiteName>,
    pub samples: usize,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub jobs: Option<usize>,
    pub corrupt_signs: bool,
}

/// Raw settings before defaults are applied; later sources override earlier ones.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    pub case: Option<String>,
    pub char: Option<String>,
    pub mode: Option<String>,
    pub m: Option<String>,
    pub denom: Option<String>,
    pub precision: Option<String>,
    pub suites: Option<String>,
    pub samples: Option<String>,
    pub seed: Option<String>,
    pub out: Option<String>,
    pub jobs: Option<String>,
    pub corrupt_signs: Option<String>,
}

impl Settings {
    /// Parses `key = value` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut s = Settings::default();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or(ConfigError::Syntax(i + 1))?;
            s.set(k.trim(), v.trim())?;
        }
        Ok(s)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let slot = match key {
            "case" => &mut self.case,
            "char" => &mut self.char,
            "mode" => &mut self.mode,
            "m" => &mut self.m,
            "D" => &mut self.denom,
            "precision" => &mut self.precision,
            "suites" => &mut self.suites,
            "samples" => &mut self.samples,
            "seed" => &mut self.seed,
            "out" => &mut self.out,
            "jobs" => &mut self.jobs,
            "corrupt_signs" => &mut self.corrupt_signs,
            _ => return Err(ConfigError::UnknownKey(key.to_string())),
        };
        *slot = Some(value.to_string());
        Ok(())
    }

    /// `other`'s values win where present.
    pub fn overlay(self, other: Settings) -> Settings {
        Settings {
            case: other.case.or(self.case),
            char: other.char.or(self.char),
            mode: other.mode.or(self.mode),
            m: other.m.or(self.m),
            denom: other.denom.or(self.denom),
            precision: other.precision.or(self.precision),
            suites: other.suites.or(self.suites),
            samples: other.samples.or(self.samples),
            seed: other.seed.or(self.seed),
            out: other.out.or(self.out),
            jobs: other.jobs.or(self.jobs),
            corrupt_signs: other.corrupt_signs.or(self.corrupt_signs),
        }
    }

    /// Applies defaults: case G, Hahn series with `m = 1`, `D = 2`, precision 40,
    /// all suites, 100 samples, seed from `env_seed` or 0.
    pub fn resolve(&self, env_seed: Option<&str>) -> Result<RunConfig, ConfigError> {
        let bad = |k: &str, v: &str| ConfigError::Value(k.to_string(), v.to_string());
        let case = match &self.case {
            None => Case::G,
            Some(v) => Case::parse(v).ok_or_else(|| bad("case", v))?,
        };
        let p = case.characteristic();
        if let Some(v) = &self.char {
            let c: u32 = v.parse().map_err(|_| bad("char", v))?;
            if c != p {
                return Err(ConfigError::Invalid(format!(
                    "case {case} needs characteristic {p}, not {c}"
                )));
            }
        }
        let m: u32 = match &self.m {
            None => 1,
            Some(v) => v.parse().map_err(|_| bad("m", v))?,
        };
        let mode = match self.mode.as_deref().unwrap_or("hahn") {
            "finite" => FieldMode::Finite,
            "hahn" => {
                let denom = match &self.denom {
                    None => 2,
                    Some(v) => v.parse().map_err(|_| bad("D", v))?,
                };
                let precision: Quad = match &self.precision {
                    None => Quad::from_int(40, p),
                    Some(v) => parse_quad(v, p).map_err(|_| bad("precision", v))?,
                };
                FieldMode::Hahn { denom, precision }
            }
            other => return Err(bad("mode", other)),
        };
        let field = FieldCfg { char: p, m, mode };
        field
            .validate()
            .map_err(|e| ConfigError::Invalid(e.to_string()))?;
        let suites = match self.suites.as_deref().map(str::trim) {
            None | Some("all") => SuiteName::ALL.to_vec(),
            Some(list) => {
                let mut v = list
                    .split(',')
                    .map(str::parse)
                    .collect::<Result<Vec<SuiteName>, _>>()?;
                v.sort();
                v.dedup();
                v
            }
        };
        let samples: usize = match &self.samples {
            None => 100,
            Some(v) => v.parse().map_err(|_| bad("samples", v))?,
        };
        if samples == 0 {
            return Err(ConfigError::Invalid("samples must be at least 1".into()));
        }
        let seed = match self.seed.as_deref().or(env_seed) {
            None => 0,
            Some(v) => v.trim().parse().map_err(|_| bad("seed", v))?,
        };
        let jobs = match &self.jobs {
            None => None,
            Some(v) => match v.parse::<usize>() {
                Ok(0) | Err(_) => return Err(bad("jobs", v)),
                Ok(n) => Some(n),
            },
        };
        let corrupt_signs = match self.corrupt_signs.as_deref() {
            None | Some("false") => false,
            Some("true") => true,
            Some(v) => return Err(bad("corrupt_signs", v)),
        };
        Ok(RunConfig {
            case,
            field,
            suites,
            samples,
            seed,
            out: self.out.as_ref().map(PathBuf::from),
            jobs,
            corrupt_signs,
        })
    }
}

impl RunConfig {
    pub fn new(case: Case, field: FieldCfg) -> Self {
        RunConfig {
            case,
            field,
            suites: SuiteName::ALL.to_vec(),
            samples: 100,
            seed: 0,
            out: None,
            jobs: None,
            corrupt_signs: false,
        }
    }

    /// Defaults for a case.
    pub fn default_for(case: Case) -> Self {
        RunConfig::new(case, FieldCfg::hahn_default(case.characteristic(), 1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_overrides() {
        let file =
            Settings::parse("# run\ncase = G\nsamples = 7\nsuites = moufang, scalars\n").unwrap();
        let flags = Settings {
            samples: Some("9".into()),
            ..Default::default()
        };
        let cfg = file.overlay(flags).resolve(Some("42")).unwrap();
        assert_eq!(cfg.case, Case::G);
        assert_eq!(cfg.samples, 9);
        assert_eq!(cfg.seed, 42);
        assert_eq!(cfg.suites, vec![SuiteName::Scalars, SuiteName::Moufang]);
        assert_eq!(cfg.field, FieldCfg::hahn_default(3, 1));
        assert_eq!(
            Settings::default().resolve(None).unwrap(),
            RunConfig::default_for(Case::G)
        );
    }

    #[test]
    fn invalid_configs() {
        let zero = Settings {
            samples: Some("0".into()),
            ..Default::default()
        };
        assert!(matches!(zero.resolve(None), Err(ConfigError::Invalid(_))));
        let mismatch = Settings {
            case: Some("B".into()),
            char: Some("3".into()),
            ..Default::default()
        };
        assert!(matches!(
            mismatch.resolve(None),
            Err(ConfigError::Invalid(_))
        ));
        assert!(matches!(
            Settings::parse("nonsense"),
            Err(ConfigError::Syntax(1))
        ));
        assert!(matches!(
            Settings::parse("colour = red"),
            Err(ConfigError::UnknownKey(_))
        ));
        let even = Settings {
            m: Some("2".into()),
            ..Default::default()
        };
        assert!(even.resolve(None).is_err());
        let suites = Settings {
            suites: Some("roots,nope".into()),
            ..Default::default()
        };
        assert!(suites.resolve(None).is_err());
    }
}
