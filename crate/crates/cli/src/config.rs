use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use moment_forge::local::DEFAULT_CUTOFF;
use moment_forge::predictor::{PredictorSettings, DEFAULT_DELTA};
use moment_forge::report::WeightSpec;
use moment_forge::PrecisionContext;
use serde::{Deserialize, Serialize};

const MAX_DIGITS: u32 = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Json,
    Csv,
}

/// Settings shared by every command. Loaded from an optional JSON file,
/// then overridden by flags.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub digits: u32,
    pub euler_cutoff: u64,
    pub delta: f64,
    pub weights: WeightSpec,
    pub seed: u64,
    #[serde(skip_serializing)]
    pub threads: Option<usize>,
    #[serde(skip_serializing)]
    pub output: Option<PathBuf>,
    #[serde(skip_serializing)]
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            digits: PrecisionContext::EXTENDED.digits(),
            euler_cutoff: DEFAULT_CUTOFF,
            delta: DEFAULT_DELTA,
            weights: WeightSpec::default(),
            seed: 0,
            threads: None,
            output: None,
            format: Format::Json,
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        PrecisionContext::new(self.digits)?;
        if self.digits > MAX_DIGITS {
            bail!("digits must be at most {MAX_DIGITS}, got {}", self.digits);
        }
        if self.euler_cutoff < 1000 {
            bail!("euler_cutoff must be at least 1000, got {}", self.euler_cutoff);
        }
        if !(self.delta > 0.0 && self.delta <= 0.01) {
            bail!("delta must be in (0, 0.01], got {}", self.delta);
        }
        let w = &self.weights;
        if !(w.t_max > 0.0 && w.t_step > 0.0 && w.t_step <= w.t_max) {
            bail!(
                "weights need 0 < t_step <= t_max, got t_step = {}, t_max = {}",
                w.t_step,
                w.t_max
            );
        }
        if self.threads == Some(0) {
            bail!("thread count must be positive");
        }
        Ok(())
    }

    pub fn ctx(&self) -> PrecisionContext {
        PrecisionContext::new(self.digits).expect("validated")
    }

    pub fn settings(&self) -> PredictorSettings {
        PredictorSettings {
            euler_cutoff: self.euler_cutoff,
            delta: self.delta,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        RunConfig::default().validate().unwrap();
    }

    #[test]
    fn partial_file_keeps_defaults() {
        let c: RunConfig = serde_json::from_str(r#"{"digits": 80, "seed": 3}"#).unwrap();
        assert_eq!(c.digits, 80);
        assert_eq!(c.seed, 3);
        assert_eq!(c.euler_cutoff, DEFAULT_CUTOFF);
        assert!(serde_json::from_str::<RunConfig>(r#"{"digitz": 80}"#).is_err());
    }

    #[test]
    fn rejects_bad_values() {
        let bad = [
            RunConfig {
                digits: 3,
                ..Default::default()
            },
            RunConfig {
                euler_cutoff: 10,
                ..Default::default()
            },
            RunConfig {
                delta: 0.5,
                ..Default::default()
            },
            RunConfig {
                threads: Some(0),
                ..Default::default()
            },
        ];
        for c in bad {
            assert!(c.validate().is_err(), "{c:?}");
        }
    }
}
