//! Simultaneous confidence bands for an isotonic quantile sequence.
//!
//! Given a fit with constant pieces `[l_i, u_i]`, indices at least
//! `gamma2 * ln n` positions from both ends of their piece form the good set.
//! There the upper band is `theta_i + gamma1 * sqrt(ln n) / sqrt(u_i - i + 1)`
//! capped at 1 and the lower band mirrors it with `i - l_i + 1`, floored at 0.
//! Outside the good set each band copies its value from the nearest good index
//! on the conservative side (right for the upper band, left for the lower
//! band), defaulting to 1 and 0. A final pass makes both sequences
//! non-decreasing: a running minimum from the right for the upper band and a
//! running maximum from the left for the lower band.
//!
//! Natural logarithms are used throughout.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantile::IsotonicFit;

/// Local growth of the noise CDF around its quantile:
/// `|F(t) - F(0)| > c_tilde * |t|` for `|t| <= l_cap`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseGrowthParams {
    pub c_tilde: f64,
    pub l_cap: f64,
}

impl NoiseGrowthParams {
    pub fn new(c_tilde: f64, l_cap: f64) -> Result<Self> {
        if !(c_tilde > 0.0 && c_tilde.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "c_tilde must be positive, got {c_tilde}"
            )));
        }
        if !(l_cap > 0.0 && l_cap.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "l_cap must be positive, got {l_cap}"
            )));
        }
        Ok(Self { c_tilde, l_cap })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BandParams {
    pub gamma1: f64,
    pub gamma2: f64,
    /// Nominal miscoverage level the parameters were chosen for.
    pub alpha: f64,
}

impl BandParams {
    /// Explicit `(gamma1, gamma2)`, not necessarily satisfying the validity
    /// conditions for any noise law.
    pub fn explicit(gamma1: f64, gamma2: f64, alpha: f64) -> Result<Self> {
        if !(gamma1 > 0.0 && gamma1.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "gamma1 must be positive, got {gamma1}"
            )));
        }
        if !(gamma2 > 0.0 && gamma2.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "gamma2 must be positive, got {gamma2}"
            )));
        }
        check_alpha(alpha)?;
        Ok(Self {
            gamma1,
            gamma2,
            alpha,
        })
    }

    /// Whether the pair guarantees `1 - alpha` simultaneous coverage under `growth`:
    /// `2 ln 3 (c^2 gamma1^2 - 1) >= ln(1/alpha)` and `gamma1 / sqrt(gamma2) <= L`.
    pub fn is_valid_for(&self, growth: &NoiseGrowthParams) -> bool {
        const SLACK: f64 = 1e-12;
        let c = growth.c_tilde;
        let lhs = 2.0 * 3f64.ln() * (c * c * self.gamma1 * self.gamma1 - 1.0);
        let rhs = (1.0 / self.alpha).ln();
        let cond1 = lhs >= rhs - SLACK * rhs.abs().max(1.0);
        let cond2 = self.gamma1 / self.gamma2.sqrt() <= growth.l_cap * (1.0 + SLACK);
        cond1 && cond2
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidAlpha(alpha))
    }
}

/// Smallest `(gamma1, gamma2)` meeting both validity conditions with equality.
pub fn band_params(alpha: f64, growth: &NoiseGrowthParams) -> Result<BandParams> {
    check_alpha(alpha)?;
    let gamma1 = (1.0 + (1.0 / alpha).ln() / (2.0 * 3f64.ln())).sqrt() / growth.c_tilde;
    let gamma2 = (gamma1 / growth.l_cap).powi(2);
    Ok(BandParams {
        gamma1,
        gamma2,
        alpha,
    })
}

/// Lower and upper band sequences with the good set they were built from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequenceBand {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    /// 0-based indices of the good set, ascending.
    pub good_set: Vec<usize>,
}

impl SequenceBand {
    pub fn len(&self) -> usize {
        self.upper.len()
    }

    pub fn is_empty(&self) -> bool {
        self.upper.is_empty()
    }

    /// Mean of `upper - lower`.
    pub fn mean_width(&self) -> f64 {
        let total: f64 = self.upper.iter().zip(&self.lower).map(|(u, l)| u - l).sum();
        total / self.len() as f64
    }
}

/// Indices whose distance to both ends of their constant piece is at least
/// `gamma2 * ln n`.
pub fn good_set(fit: &IsotonicFit, gamma2: f64) -> Result<Vec<usize>> {
    let n = fit.len();
    if n < 3 {
        return Err(Error::TooFewObservations(n));
    }
    let threshold = gamma2 * (n as f64).ln();
    Ok(fit
        .block_bounds()
        .into_iter()
        .enumerate()
        .filter(|&(i, (l, u))| ((u - i + 1).min(i - l + 1) as f64) >= threshold)
        .map(|(i, _)| i)
        .collect())
}

/// Band values before the monotonizing pass.
pub fn raw_band(fit: &IsotonicFit, params: &BandParams) -> Result<SequenceBand> {
    let good = good_set(fit, params.gamma2)?;
    let n = fit.len();
    let theta = fit.theta_hat();
    let bounds = fit.block_bounds();
    let scale = params.gamma1 * (n as f64).ln().sqrt();

    let mut is_good = vec![false; n];
    let mut upper = vec![1.0; n];
    let mut lower = vec![0.0; n];
    for &i in &good {
        is_good[i] = true;
        let (l, u) = bounds[i];
        upper[i] = (theta[i] + scale / ((u - i + 1) as f64).sqrt()).min(1.0);
        lower[i] = (theta[i] - scale / ((i - l + 1) as f64).sqrt()).max(0.0);
    }

    // Upper band: nearest good index to the right, else 1.
    let mut carry = 1.0;
    for i in (0..n).rev() {
        if is_good[i] {
            carry = upper[i];
        } else {
            upper[i] = carry;
        }
    }
    // Lower band: nearest good index to the left, else 0.
    let mut carry = 0.0;
    for i in 0..n {
        if is_good[i] {
            carry = lower[i];
        } else {
            lower[i] = carry;
        }
    }

    Ok(SequenceBand {
        lower,
        upper,
        good_set: good,
    })
}

/// Confidence band for the isotonic quantile sequence behind `fit`.
pub fn band_sequence(fit: &IsotonicFit, params: &BandParams) -> Result<SequenceBand> {
    let mut band = raw_band(fit, params)?;
    for i in (0..band.upper.len().saturating_sub(1)).rev() {
        band.upper[i] = band.upper[i].min(band.upper[i + 1]);
    }
    for i in 1..band.lower.len() {
        band.lower[i] = band.lower[i].max(band.lower[i - 1]);
    }
    debug_assert!(band.lower.iter().zip(&band.upper).all(|(l, u)| l <= u));
    Ok(band)
}

/// `true` iff `lower_i <= theta_star_i <= upper_i` for every index.
pub fn check_coverage(band: &SequenceBand, theta_star: &[f64]) -> Result<bool> {
    if theta_star.len() != band.len() {
        return Err(Error::LengthMismatch {
            expected: band.len(),
            got: theta_star.len(),
        });
    }
    Ok(band
        .lower
        .iter()
        .zip(&band.upper)
        .zip(theta_star)
        .all(|((l, u), t)| l <= t && t <= u))
}
