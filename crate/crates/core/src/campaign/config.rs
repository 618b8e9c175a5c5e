//! Flat `key = value` campaign files. Blank lines and `#` comments are
//! ignored; command-line flags are applied on top with [`CampaignConfig::set`].

use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::StoppingRule;
use crate::bsm_model::{DetectorModel, EncodingParams};
use crate::error::{Error, Result};
use crate::lattice::ModelConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IntervalMethod {
    Normal,
    Wilson,
}

impl FromStr for IntervalMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "normal" => Ok(IntervalMethod::Normal),
            "wilson" => Ok(IntervalMethod::Wilson),
            _ => Err(Error::Config(format!("unknown interval method '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignConfig {
    pub encoding: bool,
    pub pssl: bool,
    pub hic: bool,
    pub pnrd: bool,
    pub n: usize,
    pub m: usize,
    pub j: usize,
    pub d: usize,
    pub eta: f64,
    pub p_fail: f64,
    pub seed: u64,
    pub max_trials: u64,
    pub min_errors: u64,
    pub batch: u64,
    pub rel_precision: f64,
    pub interval: IntervalMethod,
    pub d_small: usize,
    pub d_large: usize,
    pub eta_grid: Vec<f64>,
    pub out: Option<PathBuf>,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        let rule = StoppingRule::default();
        Self {
            encoding: false,
            pssl: false,
            hic: true,
            pnrd: true,
            n: 2,
            m: 2,
            j: 1,
            d: 3,
            eta: 0.0,
            p_fail: 0.5,
            seed: 0,
            max_trials: rule.max_trials,
            min_errors: rule.min_errors,
            batch: rule.batch,
            rel_precision: rule.rel_precision,
            interval: rule.interval,
            d_small: 3,
            d_large: 5,
            eta_grid: vec![0.005, 0.01, 0.015, 0.02],
            out: None,
        }
    }
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("cannot parse {key} = '{value}'")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => Err(Error::Config(format!("{key} expects true/false, got '{value}'"))),
    }
}

impl CampaignConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        text.parse()
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "encoding" => self.encoding = parse_bool(key, value)?,
            "pssl" => self.pssl = parse_bool(key, value)?,
            "hic" => self.hic = parse_bool(key, value)?,
            "pnrd" => self.pnrd = parse_bool(key, value)?,
            "detector" => {
                self.pnrd = match value {
                    "pnrd" => true,
                    "onoff" => false,
                    _ => return Err(Error::Config(format!("unknown detector '{value}'"))),
                }
            }
            "n" => self.n = parse(key, value)?,
            "m" => self.m = parse(key, value)?,
            "j" => self.j = parse(key, value)?,
            "d" => self.d = parse(key, value)?,
            "eta" => self.eta = parse(key, value)?,
            "p_fail" | "pfail" => self.p_fail = parse(key, value)?,
            "seed" => self.seed = parse(key, value)?,
            "max_trials" => self.max_trials = parse(key, value)?,
            "min_errors" => self.min_errors = parse(key, value)?,
            "batch" => self.batch = parse(key, value)?,
            "rel_precision" => self.rel_precision = parse(key, value)?,
            "interval" => self.interval = value.parse()?,
            "d_small" => self.d_small = parse(key, value)?,
            "d_large" => self.d_large = parse(key, value)?,
            "d_pair" => {
                let (a, b) = value
                    .split_once(',')
                    .ok_or_else(|| Error::Config(format!("d_pair expects 'a,b', got '{value}'")))?;
                self.d_small = parse(key, a.trim())?;
                self.d_large = parse(key, b.trim())?;
            }
            "eta_grid" => {
                self.eta_grid = value
                    .split(',')
                    .filter(|s| !s.trim().is_empty())
                    .map(|s| parse(key, s.trim()))
                    .collect::<Result<_>>()?
            }
            "out" => self.out = Some(PathBuf::from(value)),
            _ => return Err(Error::Config(format!("unknown key '{key}'"))),
        }
        Ok(())
    }

    pub fn encoding_params(&self) -> Result<EncodingParams> {
        EncodingParams::new(self.n, self.m, self.j)
    }

    pub fn model(&self) -> Result<ModelConfig> {
        let cfg = if self.encoding {
            let detector = if self.pnrd {
                DetectorModel::PnrdTwo
            } else {
                DetectorModel::OnOff
            };
            ModelConfig::encoded(self.encoding_params()?, detector, self.hic, self.pssl, self.d, self.eta)
        } else {
            ModelConfig::unencoded(self.d, self.eta, self.p_fail, self.pssl)
        };
        cfg.validated()
    }

    pub fn rule(&self) -> StoppingRule {
        StoppingRule {
            rel_precision: self.rel_precision,
            min_errors: self.min_errors,
            batch: self.batch,
            max_trials: self.max_trials,
            interval: self.interval,
        }
    }
}

impl FromStr for CampaignConfig {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", lineno + 1)))?;
            cfg.set(key.trim(), value.trim())?;
        }
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_file_and_overrides() {
        let mut cfg: CampaignConfig = "# unencoded run\nencoding = false\npssl = true\nd = 5\neta = 0.01 # loss\neta_grid = 0.01, 0.02\n"
            .parse()
            .unwrap();
        assert!(cfg.pssl);
        assert_eq!(cfg.d, 5);
        assert_eq!(cfg.eta_grid, vec![0.01, 0.02]);
        cfg.set("d_pair", "9,11").unwrap();
        assert_eq!((cfg.d_small, cfg.d_large), (9, 11));
        assert!("bogus = 1".parse::<CampaignConfig>().is_err());
        assert!("d".parse::<CampaignConfig>().is_err());
    }
}
