use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::band::{band_params, BandParams, NoiseGrowthParams};
use crate::envs::{assumption_a_params, Environment, ErrorDistSpec, MonotoneFunctionSpec};
use crate::quantile::QuantileLevel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Fit,
    Band,
    Coverage,
    Width,
    Pieces,
    Bandit,
    Figures,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Fit => "fit",
            Self::Band => "band",
            Self::Coverage => "coverage",
            Self::Width => "width",
            Self::Pieces => "pieces",
            Self::Bandit => "bandit",
            Self::Figures => "figures",
        }
    }
}

/// How `(gamma1, gamma2)` are chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum BandSetting {
    /// Fixed values; runs are labelled illustrative.
    Explicit { gamma1: f64, gamma2: f64 },
    /// Minimal valid values for the noise law. `c_tilde` defaults to the
    /// closed form for the configured noise on `[-l_cap, l_cap]`.
    Derived {
        l_cap: f64,
        #[serde(default)]
        c_tilde: Option<f64>,
    },
}

impl Default for BandSetting {
    fn default() -> Self {
        Self::Explicit {
            gamma1: 0.5,
            gamma2: 0.5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

pub const DEFAULT_ALPHA: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    #[serde(default = "default_replications")]
    pub replications: usize,
    /// Sample sizes, or horizons for `bandit`.
    #[serde(default)]
    pub sizes: Vec<usize>,
    #[serde(default = "default_truth")]
    pub truth: MonotoneFunctionSpec,
    /// `[F_0, F_1]` for `bandit`.
    #[serde(default)]
    pub arms: Option<[MonotoneFunctionSpec; 2]>,
    #[serde(default = "default_noise")]
    pub noise: ErrorDistSpec,
    #[serde(default = "default_tau")]
    pub tau: f64,
    #[serde(default)]
    pub band: BandSetting,
    /// Miscoverage level. Defaults to 0.05, or `T^-2` for `bandit`.
    #[serde(default)]
    pub alpha: Option<f64>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub out_dir: Option<PathBuf>,
    #[serde(default)]
    pub format: OutputFormat,
    /// Data file for `fit` and `band`: a CSV with a `y` column and an optional `x` column.
    #[serde(default)]
    pub input: Option<PathBuf>,
    #[serde(default = "default_min_fit_points")]
    pub min_fit_points: usize,
}

fn default_replications() -> usize {
    1
}

fn default_truth() -> MonotoneFunctionSpec {
    MonotoneFunctionSpec::linear(0.0, 1.0)
}

fn default_noise() -> ErrorDistSpec {
    ErrorDistSpec::Gaussian { sigma: 0.1 }
}

fn default_tau() -> f64 {
    0.5
}

fn default_min_fit_points() -> usize {
    3
}

impl ExperimentConfig {
    /// Defaults for `kind`: Gaussian(0.1) noise, `f(x) = x`, explicit `0.5 / 0.5` band.
    pub fn new(kind: ExperimentKind) -> Self {
        Self {
            experiment: kind,
            replications: default_replications(),
            sizes: Vec::new(),
            truth: default_truth(),
            arms: None,
            noise: default_noise(),
            tau: default_tau(),
            band: BandSetting::default(),
            alpha: None,
            seed: 0,
            out_dir: None,
            format: OutputFormat::default(),
            input: None,
            min_fit_points: default_min_fit_points(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        serde_json::from_str(text).map_err(|e| HarnessError::Config(format!("invalid config: {e}")))
    }

    pub fn tau_level(&self) -> Result<QuantileLevel, HarnessError> {
        QuantileLevel::new(self.tau).map_err(config_err)
    }

    /// Sizes, or `default` when none are configured.
    pub fn sizes_or(&self, default: &[usize]) -> Vec<usize> {
        if self.sizes.is_empty() {
            default.to_vec()
        } else {
            self.sizes.clone()
        }
    }

    pub fn illustrative(&self) -> bool {
        matches!(self.band, BandSetting::Explicit { .. })
    }

    pub fn growth(&self) -> Result<Option<NoiseGrowthParams>, HarnessError> {
        match self.band {
            BandSetting::Explicit { .. } => Ok(None),
            BandSetting::Derived {
                l_cap,
                c_tilde: Some(c),
            } => NoiseGrowthParams::new(c, l_cap)
                .map(Some)
                .map_err(config_err),
            BandSetting::Derived {
                l_cap,
                c_tilde: None,
            } => assumption_a_params(&self.noise, l_cap)
                .map(Some)
                .map_err(config_err),
        }
    }

    /// Band parameters for the sequence experiments.
    pub fn band_params(&self) -> Result<BandParams, HarnessError> {
        let alpha = self.alpha.unwrap_or(DEFAULT_ALPHA);
        match (self.band, self.growth()?) {
            (BandSetting::Explicit { gamma1, gamma2 }, _) => {
                BandParams::explicit(gamma1, gamma2, alpha)
            }
            (_, Some(growth)) => band_params(alpha, &growth),
            (_, None) => unreachable!("derived setting always yields growth parameters"),
        }
        .map_err(config_err)
    }

    pub fn environment(&self) -> Result<Environment, HarnessError> {
        let [f0, f1] = self
            .arms
            .clone()
            .ok_or_else(|| HarnessError::Config("bandit experiments need `arms`".into()))?;
        Ok(Environment {
            f0,
            f1,
            noise: self.noise,
        })
    }

    /// Checks everything the chosen experiment needs before any computation.
    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.replications == 0 {
            return Err(HarnessError::Config(
                "replications must be at least 1".into(),
            ));
        }
        self.tau_level()?;
        self.truth.validate().map_err(config_err)?;
        self.noise.validate().map_err(config_err)?;
        match self.experiment {
            ExperimentKind::Bandit => {
                self.environment()?.validate().map_err(config_err)?;
                if self.sizes.contains(&0) {
                    return Err(HarnessError::Config("horizons must be at least 1".into()));
                }
                if self.min_fit_points < 3 {
                    return Err(HarnessError::Config(
                        "min_fit_points must be at least 3".into(),
                    ));
                }
                if let Some(alpha) = self.alpha {
                    if !(alpha > 0.0 && alpha < 1.0) {
                        return Err(HarnessError::Config(format!(
                            "alpha must lie in (0, 1), got {alpha}"
                        )));
                    }
                }
                if let BandSetting::Explicit { gamma1, gamma2 } = self.band {
                    BandParams::explicit(gamma1, gamma2, 0.5).map_err(config_err)?;
                }
                self.growth()?;
            }
            _ => {
                if let Some(&n) = self.sizes.iter().find(|&&n| n < 3) {
                    return Err(HarnessError::Config(format!(
                        "sample sizes must be at least 3, got {n}"
                    )));
                }
                self.band_params()?;
            }
        }
        Ok(())
    }
}

fn config_err(e: crate::error::Error) -> HarnessError {
    HarnessError::Config(e.to_string())
}
