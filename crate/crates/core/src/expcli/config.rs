//! Experiment configuration: defaults, a flat JSON file, and command-line
//! overrides, merged in that order of increasing precedence.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::ExpError;
use crate::galois_id::Thresholds;
use crate::permkit::DEFAULT_BOUND;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!("unknown format '{other}', expected csv or json")),
        }
    }
}

/// A list given either as a JSON array or as a comma-separated string.
#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum NumberList {
    List(Vec<u64>),
    Text(String),
}

impl NumberList {
    pub fn values(&self) -> Result<Vec<u64>, ExpError> {
        match self {
            NumberList::List(v) => Ok(v.clone()),
            NumberList::Text(s) => parse_list(s),
        }
    }
}

pub fn parse_list(s: &str) -> Result<Vec<u64>, ExpError> {
    s.split(',')
        .map(|t| t.trim())
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<u64>()
                .map_err(|_| ExpError::Config(format!("not a number: '{t}'")))
        })
        .collect()
}

/// Every setting optional; used both for the config file and for flags.
#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartialConfig {
    pub scenario: Option<String>,
    pub k: Option<NumberList>,
    pub samples: Option<usize>,
    pub primes_min: Option<u64>,
    pub primes_max: Option<u64>,
    pub budget: Option<usize>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub format: Option<OutputFormat>,
    pub tv_max: Option<f64>,
    pub coverage_min: Option<f64>,
    pub tv_reject: Option<f64>,
    pub field_primes: Option<NumberList>,
    pub bound: Option<usize>,
    pub k_max: Option<usize>,
}

impl PartialConfig {
    pub fn from_json_file(path: &Path) -> Result<Self, ExpError> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text)
            .map_err(|e| ExpError::Config(format!("{}: {e}", path.display())))
    }

    /// Fields set in `self` win over those in `base`.
    pub fn over(self, base: PartialConfig) -> PartialConfig {
        PartialConfig {
            scenario: self.scenario.or(base.scenario),
            k: self.k.or(base.k),
            samples: self.samples.or(base.samples),
            primes_min: self.primes_min.or(base.primes_min),
            primes_max: self.primes_max.or(base.primes_max),
            budget: self.budget.or(base.budget),
            seed: self.seed.or(base.seed),
            out: self.out.or(base.out),
            format: self.format.or(base.format),
            tv_max: self.tv_max.or(base.tv_max),
            coverage_min: self.coverage_min.or(base.coverage_min),
            tv_reject: self.tv_reject.or(base.tv_reject),
            field_primes: self.field_primes.or(base.field_primes),
            bound: self.bound.or(base.bound),
            k_max: self.k_max.or(base.k_max),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub scenario: String,
    pub ks: Vec<usize>,
    pub samples: usize,
    pub primes_min: u64,
    pub primes_max: u64,
    pub budget: usize,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
    pub thresholds: Thresholds,
    pub field_primes: Vec<u64>,
    pub bound: usize,
    pub k_max: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            scenario: "sl(2)".into(),
            ks: vec![5, 10, 15, 20, 25, 30],
            samples: 200,
            primes_min: 1000,
            primes_max: 100_000,
            budget: 300,
            seed: 1,
            out: None,
            format: OutputFormat::Csv,
            thresholds: Thresholds::default(),
            field_primes: vec![5, 7, 11, 13, 17],
            bound: DEFAULT_BOUND,
            k_max: 10,
        }
    }
}

impl ExperimentConfig {
    pub fn resolve(p: PartialConfig) -> Result<Self, ExpError> {
        let d = ExperimentConfig::default();
        let tv_max = p.tv_max.unwrap_or(d.thresholds.tv_max);
        let cfg = ExperimentConfig {
            scenario: p.scenario.unwrap_or(d.scenario),
            ks: match p.k {
                Some(l) => l.values()?.into_iter().map(|k| k as usize).collect(),
                None => d.ks,
            },
            samples: p.samples.unwrap_or(d.samples),
            primes_min: p.primes_min.unwrap_or(d.primes_min),
            primes_max: p.primes_max.unwrap_or(d.primes_max),
            budget: p.budget.unwrap_or(d.budget),
            seed: p.seed.unwrap_or(d.seed),
            out: p.out.or(d.out),
            format: p.format.unwrap_or(d.format),
            thresholds: Thresholds {
                tv_max,
                coverage_min: p.coverage_min.unwrap_or(d.thresholds.coverage_min),
                tv_reject: p.tv_reject.unwrap_or(d.thresholds.tv_reject.max(tv_max)),
            },
            field_primes: match p.field_primes {
                Some(l) => l.values()?,
                None => d.field_primes,
            },
            bound: p.bound.unwrap_or(d.bound),
            k_max: p.k_max.unwrap_or(d.k_max),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ExpError> {
        let err = |m: &str| Err(ExpError::Config(m.into()));
        if self.ks.is_empty() {
            return err("k list is empty");
        }
        if self.ks.windows(2).any(|w| w[0] >= w[1]) {
            return err("k values must be strictly ascending");
        }
        if self.samples == 0 || self.budget == 0 || self.bound == 0 {
            return err("samples, budget and bound must be positive");
        }
        if self.primes_min < 2 || self.primes_min > self.primes_max {
            return err("prime window must satisfy 2 <= primes-min <= primes-max");
        }
        let t = &self.thresholds;
        if !(t.tv_max > 0.0 && t.tv_max <= 1.0) || !(t.coverage_min > 0.0 && t.coverage_min <= 1.0)
        {
            return err("tv-max and coverage-min must lie in (0, 1]");
        }
        if t.tv_reject.is_nan() || t.tv_reject < t.tv_max {
            return err("tv-reject must be at least tv-max");
        }
        if self.field_primes.is_empty() {
            return err("field prime list is empty");
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let file: PartialConfig =
            serde_json::from_str(r#"{"scenario": "sl(3)", "k": "5,10", "samples": 50, "seed": 9}"#)
                .unwrap();
        let flags = PartialConfig {
            samples: Some(7),
            ..Default::default()
        };
        let cfg = ExperimentConfig::resolve(flags.over(file)).unwrap();
        assert_eq!(cfg.scenario, "sl(3)");
        assert_eq!(cfg.ks, vec![5, 10]);
        assert_eq!(cfg.samples, 7);
        assert_eq!(cfg.seed, 9);
        assert_eq!(cfg.budget, 300);
    }

    #[test]
    fn list_forms() {
        let a: PartialConfig = serde_json::from_str(r#"{"k": [1, 2, 3]}"#).unwrap();
        let b: PartialConfig = serde_json::from_str(r#"{"k": "1,2,3"}"#).unwrap();
        assert_eq!(
            a.k.unwrap().values().unwrap(),
            b.k.unwrap().values().unwrap()
        );
    }

    #[test]
    fn validation() {
        let bad = |p: PartialConfig| ExperimentConfig::resolve(p).is_err();
        assert!(bad(PartialConfig {
            k: Some(NumberList::Text("10,5".into())),
            ..Default::default()
        }));
        assert!(bad(PartialConfig {
            samples: Some(0),
            ..Default::default()
        }));
        assert!(bad(PartialConfig {
            tv_max: Some(1.5),
            ..Default::default()
        }));
        assert!(bad(PartialConfig {
            primes_min: Some(10),
            primes_max: Some(5),
            ..Default::default()
        }));
        assert!(serde_json::from_str::<PartialConfig>(r#"{"bogus": 1}"#).is_err());
    }
}
