//! Exact dynamic-programming solver for small isotonic quantile problems.
//!
//! Used as an independent check on the PAVA fit. The optimal block values of a
//! box-constrained isotonic quantile fit are block quantiles clipped to the
//! box, so restricting every coordinate to the finite level set
//! `{clip(y_i)} ∪ {lo, hi}` loses nothing.

use crate::error::{Error, Result};
use crate::quantile::{pinball_loss, QuantileLevel};

/// Default size limit for [`dp_oracle_fit`].
pub const ORACLE_MAX_N: usize = 12;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleFit {
    pub objective: f64,
    pub theta: Vec<f64>,
}

/// Exact minimizer for `n <= ORACLE_MAX_N`.
pub fn dp_oracle_fit(y: &[f64], tau: QuantileLevel, lo: f64, hi: f64) -> Result<OracleFit> {
    dp_oracle_fit_bounded(y, tau, lo, hi, ORACLE_MAX_N)
}

pub fn dp_oracle_fit_bounded(
    y: &[f64],
    tau: QuantileLevel,
    lo: f64,
    hi: f64,
    max_n: usize,
) -> Result<OracleFit> {
    let n = y.len();
    if n == 0 {
        return Err(Error::Empty);
    }
    if n > max_n {
        return Err(Error::OracleTooLarge { n, max: max_n });
    }
    if !(lo < hi) {
        return Err(Error::InvalidBox { lo, hi });
    }
    if let Some(i) = y.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite(i));
    }

    let mut levels: Vec<f64> = y.iter().map(|v| v.clamp(lo, hi)).collect();
    levels.push(lo);
    levels.push(hi);
    levels.sort_by(f64::total_cmp);
    levels.dedup();
    let m = levels.len();

    // cost[i][k]: best objective over y[..=i] with theta_i = levels[k].
    // choice[i][k]: level index of theta_{i-1} on that optimal path.
    let mut cost = vec![vec![0.0; m]; n];
    let mut choice = vec![vec![0usize; m]; n];
    for k in 0..m {
        cost[0][k] = pinball_loss(y[0] - levels[k], tau);
    }
    for i in 1..n {
        let mut best = f64::INFINITY;
        let mut best_k = 0;
        for k in 0..m {
            if cost[i - 1][k] < best {
                best = cost[i - 1][k];
                best_k = k;
            }
            cost[i][k] = best + pinball_loss(y[i] - levels[k], tau);
            choice[i][k] = best_k;
        }
    }

    let (mut k, objective) =
        cost[n - 1]
            .iter()
            .copied()
            .enumerate()
            .fold(
                (0, f64::INFINITY),
                |acc, (k, c)| if c < acc.1 { (k, c) } else { acc },
            );
    let mut theta = vec![0.0; n];
    for i in (0..n).rev() {
        theta[i] = levels[k];
        k = choice[i][k];
    }
    Ok(OracleFit { objective, theta })
}
