//! Synthetic data-generating processes: monotone truths, symmetric noise, and
//! local growth constants for the noise CDF.

use rand::Rng;
use rand_distr::{Cauchy, Distribution, Normal};
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal as StdNormal};

use crate::band::NoiseGrowthParams;
use crate::band_fun::DesignData;
use crate::error::{Error, Result};
use crate::intervals::IntervalUnion;
use crate::quantile::QuantileLevel;

/// A non-decreasing function `[0, 1] -> [0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MonotoneFunctionSpec {
    /// `intercept + slope * x`.
    Linear { intercept: f64, slope: f64 },
    /// Right-continuous step function: `values[0]` below `breakpoints[0]`,
    /// `values[j]` on `[breakpoints[j-1], breakpoints[j])`, and the last value
    /// from the last breakpoint up to 1.
    PiecewiseConstant {
        breakpoints: Vec<f64>,
        values: Vec<f64>,
    },
    /// Pointwise sum of the parts.
    Composite { parts: Vec<MonotoneFunctionSpec> },
}

impl MonotoneFunctionSpec {
    pub fn linear(intercept: f64, slope: f64) -> Self {
        Self::Linear { intercept, slope }
    }

    pub fn constant(value: f64) -> Self {
        Self::Linear {
            intercept: value,
            slope: 0.0,
        }
    }

    /// `base + step * floor(k x)` on `[0, 1)`, held at its last level at `x = 1`.
    pub fn floor_steps(base: f64, step: f64, k: usize) -> Self {
        let breakpoints = (1..k).map(|j| j as f64 / k as f64).collect();
        let values = (0..k).map(|j| base + step * j as f64).collect();
        Self::PiecewiseConstant {
            breakpoints,
            values,
        }
    }

    /// `self + offset`.
    pub fn shifted(self, offset: f64) -> Self {
        Self::Composite {
            parts: vec![self, Self::constant(offset)],
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.validate_shape()?;
        let (lo, hi) = (self.eval_unchecked(0.0), self.eval_unchecked(1.0));
        if lo < 0.0 || hi > 1.0 {
            return Err(Error::InvalidSpec(format!(
                "range [{lo}, {hi}] leaves [0, 1]"
            )));
        }
        Ok(())
    }

    fn validate_shape(&self) -> Result<()> {
        match self {
            Self::Linear { intercept, slope } => {
                if !intercept.is_finite() || !slope.is_finite() || *slope < 0.0 {
                    return Err(Error::InvalidSpec(format!(
                        "linear slope {slope} must be finite and >= 0"
                    )));
                }
            }
            Self::PiecewiseConstant {
                breakpoints,
                values,
            } => {
                if values.len() != breakpoints.len() + 1 {
                    return Err(Error::InvalidSpec(format!(
                        "{} breakpoints need {} values, got {}",
                        breakpoints.len(),
                        breakpoints.len() + 1,
                        values.len()
                    )));
                }
                if breakpoints.iter().any(|b| !(*b > 0.0 && *b < 1.0)) {
                    return Err(Error::InvalidSpec("breakpoints must lie in (0, 1)".into()));
                }
                if breakpoints.windows(2).any(|w| !(w[0] < w[1])) {
                    return Err(Error::InvalidSpec(
                        "breakpoints must strictly increase".into(),
                    ));
                }
                if values.iter().any(|v| !v.is_finite()) || values.windows(2).any(|w| w[1] < w[0]) {
                    return Err(Error::InvalidSpec(
                        "step values must be finite and non-decreasing".into(),
                    ));
                }
            }
            Self::Composite { parts } => {
                if parts.is_empty() {
                    return Err(Error::InvalidSpec(
                        "composite needs at least one part".into(),
                    ));
                }
                for p in parts {
                    p.validate_shape()?;
                }
            }
        }
        Ok(())
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::OutOfDomain(x));
        }
        Ok(self.eval_unchecked(x))
    }

    pub(crate) fn eval_unchecked(&self, x: f64) -> f64 {
        match self {
            Self::Linear { intercept, slope } => intercept + slope * x,
            Self::PiecewiseConstant {
                breakpoints,
                values,
            } => values[breakpoints.partition_point(|&b| b <= x)],
            Self::Composite { parts } => parts.iter().map(|p| p.eval_unchecked(x)).sum(),
        }
    }
}

/// Evaluates a truth function at `x` in `[0, 1]`.
pub fn eval_truth(spec: &MonotoneFunctionSpec, x: f64) -> Result<f64> {
    spec.eval(x)
}

/// Additive noise law, symmetric about 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ErrorDistSpec {
    Gaussian {
        sigma: f64,
    },
    Cauchy {
        scale: f64,
    },
    /// Zero noise; for tests.
    Degenerate,
}

impl ErrorDistSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::Gaussian { sigma } if !(sigma > 0.0 && sigma.is_finite()) => Err(
                Error::InvalidSpec(format!("gaussian sigma must be positive, got {sigma}")),
            ),
            Self::Cauchy { scale } if !(scale > 0.0 && scale.is_finite()) => Err(
                Error::InvalidSpec(format!("cauchy scale must be positive, got {scale}")),
            ),
            _ => Ok(()),
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            Self::Gaussian { sigma } => Normal::new(0.0, sigma)
                .expect("validated sigma")
                .sample(rng),
            Self::Cauchy { scale } => Cauchy::new(0.0, scale)
                .expect("validated scale")
                .sample(rng),
            Self::Degenerate => 0.0,
        }
    }

    pub fn cdf(&self, t: f64) -> f64 {
        match *self {
            Self::Gaussian { sigma } => std_normal().cdf(t / sigma),
            Self::Cauchy { scale } => 0.5 + (t / scale).atan() / std::f64::consts::PI,
            Self::Degenerate => {
                if t >= 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    /// Population tau-quantile.
    pub fn quantile(&self, tau: QuantileLevel) -> f64 {
        let t = tau.value();
        match *self {
            Self::Gaussian { sigma } => sigma * std_normal().inverse_cdf(t),
            Self::Cauchy { scale } => scale * (std::f64::consts::PI * (t - 0.5)).tan(),
            Self::Degenerate => 0.0,
        }
    }
}

fn std_normal() -> StdNormal {
    StdNormal::new(0.0, 1.0).expect("standard normal")
}

/// One draw from the noise law.
pub fn sample_noise<R: Rng + ?Sized>(spec: &ErrorDistSpec, rng: &mut R) -> f64 {
    spec.sample(rng)
}

const GROWTH_SHRINK: f64 = 0.999;

/// Local growth constant of the noise CDF around its median on `[-l_cap, l_cap]`.
///
/// For a symmetric unimodal law `(F(t) - F(0)) / t` is smallest at `t = l_cap`,
/// so the infimum has a closed form; it is shrunk by 0.1% so the growth
/// inequality holds strictly.
pub fn assumption_a_params(spec: &ErrorDistSpec, l_cap: f64) -> Result<NoiseGrowthParams> {
    spec.validate()?;
    if !(l_cap > 0.0 && l_cap.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "l_cap must be positive, got {l_cap}"
        )));
    }
    let slope = match *spec {
        ErrorDistSpec::Gaussian { sigma } => (std_normal().cdf(l_cap / sigma) - 0.5) / l_cap,
        ErrorDistSpec::Cauchy { scale } => (l_cap / scale).atan() / (std::f64::consts::PI * l_cap),
        ErrorDistSpec::Degenerate => return Err(Error::DegenerateNoise),
    };
    NoiseGrowthParams::new(GROWTH_SHRINK * slope, l_cap)
}

/// Two arms' reward functions and the shared noise law.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Environment {
    pub f0: MonotoneFunctionSpec,
    pub f1: MonotoneFunctionSpec,
    pub noise: ErrorDistSpec,
}

impl Environment {
    pub fn validate(&self) -> Result<()> {
        self.f0.validate()?;
        self.f1.validate()?;
        self.noise.validate()
    }

    pub fn arm(&self, arm: usize) -> &MonotoneFunctionSpec {
        if arm == 0 {
            &self.f0
        } else {
            &self.f1
        }
    }
}

/// Random-design sample with the hidden truth and noise kept for assertions.
#[derive(Debug, Clone, PartialEq)]
pub struct RegressionSample {
    pub data: DesignData,
    pub truth: Vec<f64>,
    pub noise: Vec<f64>,
}

/// `n` i.i.d. pairs with `x ~ Unif(region)` and `y = f(x) + noise`.
pub fn generate_regression_sample<R: Rng + ?Sized>(
    f: &MonotoneFunctionSpec,
    noise: &ErrorDistSpec,
    region: &IntervalUnion,
    n: usize,
    rng: &mut R,
) -> Result<RegressionSample> {
    f.validate()?;
    noise.validate()?;
    if region.measure() <= 0.0 {
        return Err(Error::EmptyRegion);
    }
    let mut points = Vec::with_capacity(n);
    let mut truth = Vec::with_capacity(n);
    let mut eps = Vec::with_capacity(n);
    for _ in 0..n {
        let x = region.sample_uniform(rng)?;
        let fx = f.eval_unchecked(x);
        let e = noise.sample(rng);
        points.push((x, fx + e));
        truth.push(fx);
        eps.push(e);
    }
    Ok(RegressionSample {
        data: DesignData { points },
        truth,
        noise: eps,
    })
}

/// Fixed-design sequence `y_i = f(i / n) + noise_i`, `i = 1..n`.
#[derive(Debug, Clone, PartialEq)]
pub struct SequenceSample {
    pub y: Vec<f64>,
    pub theta_star: Vec<f64>,
    pub noise: Vec<f64>,
}

pub fn generate_sequence_sample<R: Rng + ?Sized>(
    f: &MonotoneFunctionSpec,
    noise: &ErrorDistSpec,
    n: usize,
    rng: &mut R,
) -> Result<SequenceSample> {
    f.validate()?;
    noise.validate()?;
    let theta_star: Vec<f64> = (1..=n)
        .map(|i| f.eval_unchecked(i as f64 / n as f64))
        .collect();
    let eps: Vec<f64> = (0..n).map(|_| noise.sample(rng)).collect();
    let y = theta_star.iter().zip(&eps).map(|(t, e)| t + e).collect();
    Ok(SequenceSample {
        y,
        theta_star,
        noise: eps,
    })
}
