//! Empirical quantiles, the pinball loss and the box-constrained isotonic
//! quantile regression estimator.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pava::{left_quantile_rank, pool_adjacent_violators, MeanPool, QuantilePool};

/// A quantile level strictly inside `(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct QuantileLevel(f64);

impl QuantileLevel {
    pub const MEDIAN: QuantileLevel = QuantileLevel(0.5);

    pub fn new(tau: f64) -> Result<Self> {
        if tau > 0.0 && tau < 1.0 {
            Ok(Self(tau))
        } else {
            Err(Error::InvalidTau(tau))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for QuantileLevel {
    type Error = Error;

    fn try_from(tau: f64) -> Result<Self> {
        Self::new(tau)
    }
}

impl From<QuantileLevel> for f64 {
    fn from(level: QuantileLevel) -> f64 {
        level.0
    }
}

fn check_finite(values: &[f64]) -> Result<()> {
    match values.iter().position(|v| !v.is_finite()) {
        Some(i) => Err(Error::NonFinite(i)),
        None => Ok(()),
    }
}

/// Left empirical tau-quantile: the smallest sample value `q` with
/// `#{x < q} / n <= tau <= #{x <= q} / n`.
pub fn tau_quantile(sample: &[f64], tau: QuantileLevel) -> Result<f64> {
    if sample.is_empty() {
        return Err(Error::Empty);
    }
    check_finite(sample)?;
    let mut sorted = sample.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(sorted[left_quantile_rank(sorted.len(), tau.value())])
}

/// Check loss `r * (tau - 1{r < 0})`.
pub fn pinball_loss(r: f64, tau: QuantileLevel) -> f64 {
    if r < 0.0 {
        r * (tau.value() - 1.0)
    } else {
        r * tau.value()
    }
}

/// Total pinball loss of `theta` against the observations `y`.
pub fn objective(y: &[f64], theta: &[f64], tau: QuantileLevel) -> Result<f64> {
    if theta.len() != y.len() {
        return Err(Error::LengthMismatch {
            expected: y.len(),
            got: theta.len(),
        });
    }
    Ok(y.iter()
        .zip(theta)
        .map(|(yi, ti)| pinball_loss(yi - ti, tau))
        .sum())
}

/// A maximal run of equal fitted values, with inclusive 0-based endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Block {
    pub start: usize,
    pub end: usize,
    pub value: f64,
}

impl Block {
    pub fn len(&self) -> usize {
        self.end - self.start + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// A non-decreasing fitted sequence together with its constant pieces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsotonicFit {
    theta_hat: Vec<f64>,
    blocks: Vec<Block>,
}

impl IsotonicFit {
    /// Wraps an already non-decreasing sequence.
    pub fn from_values(theta_hat: Vec<f64>) -> Result<Self> {
        if theta_hat.is_empty() {
            return Err(Error::Empty);
        }
        check_finite(&theta_hat)?;
        if let Some(i) = theta_hat.windows(2).position(|w| w[1] < w[0]) {
            return Err(Error::NotMonotone(i + 1));
        }
        let blocks = runs(&theta_hat);
        Ok(Self { theta_hat, blocks })
    }

    pub fn theta_hat(&self) -> &[f64] {
        &self.theta_hat
    }

    /// Constant pieces in index order; values strictly increase across them.
    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    /// Number of constant pieces.
    pub fn count_pieces(&self) -> usize {
        self.blocks.len()
    }

    pub fn len(&self) -> usize {
        self.theta_hat.len()
    }

    pub fn is_empty(&self) -> bool {
        self.theta_hat.is_empty()
    }

    /// `(l, u)` endpoints of the constant piece containing each index.
    pub fn block_bounds(&self) -> Vec<(usize, usize)> {
        let mut bounds = Vec::with_capacity(self.len());
        for b in &self.blocks {
            bounds.extend(std::iter::repeat_n((b.start, b.end), b.len()));
        }
        bounds
    }
}

fn runs(theta: &[f64]) -> Vec<Block> {
    let mut blocks: Vec<Block> = Vec::new();
    for (i, &v) in theta.iter().enumerate() {
        match blocks.last_mut() {
            Some(last) if last.value == v => last.end = i,
            _ => blocks.push(Block {
                start: i,
                end: i,
                value: v,
            }),
        }
    }
    blocks
}

/// Isotonic tau-quantile regression over `lo <= theta_1 <= ... <= theta_n <= hi`.
///
/// Pooled blocks take the left tau-quantile of their observations, and the
/// unconstrained solution is clipped to the box afterwards.
pub fn fit_isotonic_quantile(
    y: &[f64],
    tau: QuantileLevel,
    lo: f64,
    hi: f64,
) -> Result<IsotonicFit> {
    if y.is_empty() {
        return Err(Error::Empty);
    }
    check_finite(y)?;
    if !(lo < hi) {
        return Err(Error::InvalidBox { lo, hi });
    }
    let mut pool = QuantilePool::new(y, tau.value());
    let fitted = pool_adjacent_violators(&mut pool, y.len())
        .into_iter()
        .map(|v| v.clamp(lo, hi))
        .collect();
    IsotonicFit::from_values(fitted)
}

/// Isotonic fit on the default parameter box `[0, 1]`.
pub fn fit_isotonic_median_unit(y: &[f64]) -> Result<IsotonicFit> {
    fit_isotonic_quantile(y, QuantileLevel::MEDIAN, 0.0, 1.0)
}

/// Unconstrained isotonic least-squares fit (block means).
pub fn fit_isotonic_mean(y: &[f64]) -> Result<IsotonicFit> {
    if y.is_empty() {
        return Err(Error::Empty);
    }
    check_finite(y)?;
    let fitted = pool_adjacent_violators(&mut MeanPool { y }, y.len());
    IsotonicFit::from_values(fitted)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(t: f64) -> QuantileLevel {
        QuantileLevel::new(t).unwrap()
    }

    #[test]
    fn quantile_level_rejects_closed_endpoints() {
        assert!(QuantileLevel::new(0.0).is_err());
        assert!(QuantileLevel::new(1.0).is_err());
        assert!(QuantileLevel::new(f64::NAN).is_err());
        assert!(QuantileLevel::new(1e-9).is_ok());
    }

    #[test]
    fn tau_quantile_examples() {
        assert_eq!(tau_quantile(&[1.0, 2.0, 3.0], q(0.5)).unwrap(), 2.0);
        assert_eq!(tau_quantile(&[5.0], q(0.3)).unwrap(), 5.0);
        assert_eq!(tau_quantile(&[], q(0.5)), Err(Error::Empty));
    }

    #[test]
    fn tau_quantile_two_points_by_definition_scan() {
        // Scan both candidates against P[X<q] <= tau <= P[X<=q] and keep the smallest.
        let sample = [0.0, 1.0];
        let tau = 0.5;
        let n = sample.len() as f64;
        let valid: Vec<f64> = sample
            .iter()
            .copied()
            .filter(|&c| {
                let below = sample.iter().filter(|&&x| x < c).count() as f64 / n;
                let at_most = sample.iter().filter(|&&x| x <= c).count() as f64 / n;
                below <= tau && tau <= at_most
            })
            .collect();
        let smallest = valid.iter().copied().fold(f64::INFINITY, f64::min);
        assert_eq!(smallest, 0.0);
        assert_eq!(tau_quantile(&sample, q(tau)).unwrap(), smallest);
    }

    #[test]
    fn pinball_examples() {
        assert_eq!(pinball_loss(2.0, q(0.5)), 1.0);
        assert!((pinball_loss(-1.0, q(0.3)) - 0.7).abs() < 1e-15);
        assert_eq!(pinball_loss(0.0, q(0.9)), 0.0);
    }

    #[test]
    fn objective_examples() {
        let y = [0.3, -2.0, 7.5];
        assert_eq!(objective(&y, &y, q(0.8)).unwrap(), 0.0);
        assert_eq!(objective(&[1.0, 0.0], &[0.0, 0.0], q(0.5)).unwrap(), 0.5);
        assert_eq!(objective(&[1.0, 0.0], &[0.5, 0.5], q(0.5)).unwrap(), 0.5);
        assert!(matches!(
            objective(&[1.0], &[1.0, 2.0], q(0.5)),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn fit_examples() {
        let fit = fit_isotonic_quantile(&[0.2, 0.5, 0.9], q(0.5), 0.0, 1.0).unwrap();
        assert_eq!(fit.theta_hat(), &[0.2, 0.5, 0.9]);
        assert_eq!(fit.count_pieces(), 3);

        let fit = fit_isotonic_quantile(&[1.0, 0.0], q(0.5), 0.0, 1.0).unwrap();
        assert_eq!(fit.theta_hat(), &[0.0, 0.0]);
        assert_eq!(fit.count_pieces(), 1);

        let fit = fit_isotonic_quantile(&[-0.5, 2.0], q(0.5), 0.0, 1.0).unwrap();
        assert_eq!(fit.theta_hat(), &[0.0, 1.0]);
        assert_eq!(fit.count_pieces(), 2);
    }

    #[test]
    fn fit_rejects_bad_input() {
        assert_eq!(
            fit_isotonic_quantile(&[], q(0.5), 0.0, 1.0),
            Err(Error::Empty)
        );
        assert!(matches!(
            fit_isotonic_quantile(&[1.0], q(0.5), 1.0, 1.0),
            Err(Error::InvalidBox { .. })
        ));
        assert_eq!(
            fit_isotonic_quantile(&[0.1, f64::NAN], q(0.5), 0.0, 1.0),
            Err(Error::NonFinite(1))
        );
    }

    #[test]
    fn block_examples() {
        let fit = IsotonicFit::from_values(vec![0.0, 0.0, 1.0]).unwrap();
        assert_eq!(
            fit.blocks(),
            &[
                Block {
                    start: 0,
                    end: 1,
                    value: 0.0
                },
                Block {
                    start: 2,
                    end: 2,
                    value: 1.0
                }
            ]
        );
        assert_eq!(fit.count_pieces(), 2);
        assert_eq!(fit.block_bounds(), vec![(0, 1), (0, 1), (2, 2)]);

        let fit = IsotonicFit::from_values(vec![0.4; 7]).unwrap();
        assert_eq!(
            fit.blocks(),
            &[Block {
                start: 0,
                end: 6,
                value: 0.4
            }]
        );
        assert_eq!(fit.count_pieces(), 1);

        let fit = IsotonicFit::from_values(vec![0.2, 0.5, 0.9]).unwrap();
        assert!(fit.blocks().iter().all(|b| b.len() == 1));
        assert_eq!(fit.count_pieces(), 3);
    }

    #[test]
    fn from_values_rejects_decreasing() {
        assert_eq!(
            IsotonicFit::from_values(vec![0.0, 0.3, 0.1]),
            Err(Error::NotMonotone(2))
        );
    }

    #[test]
    fn equal_pava_blocks_collapse_into_one_piece() {
        // Two pooled blocks with the same median and a clipped tail.
        let fit = fit_isotonic_quantile(&[0.5, 0.3, 0.5, 0.3, 3.0, 4.0], q(0.5), 0.0, 1.0).unwrap();
        assert_eq!(fit.theta_hat(), &[0.3, 0.3, 0.3, 0.3, 1.0, 1.0]);
        assert_eq!(fit.count_pieces(), 2);
    }

    #[test]
    fn least_squares_is_unclipped() {
        let fit = fit_isotonic_mean(&[-3.0, 5.0, 1.0]).unwrap();
        assert_eq!(fit.theta_hat(), &[-3.0, 3.0, 3.0]);
    }

    #[test]
    fn quantile_level_json_round_trip() {
        let level: QuantileLevel = serde_json::from_str("0.7").unwrap();
        assert_eq!(level.value(), 0.7);
        assert!(serde_json::from_str::<QuantileLevel>("1.5").is_err());
    }
}
