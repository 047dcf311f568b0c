//! Band functions on `[0, 1]` for random-design data.
//!
//! Observations are sorted by their design point, the sequence band is built
//! on the responses in that order, and the band values are attached to the
//! sorted design points `x_(1) <= ... <= x_(n)`. Off the design points,
//! `U(x) = U(x+)` with `x+` the smallest design point `>= x` and
//! `L(x) = L(x-)` with `x-` the largest design point `<= x`. When `x+` does
//! not exist `U(x) = 1`; when `x-` does not exist `L(x) = 0`.

use serde::{Deserialize, Serialize};

use crate::band::{band_sequence, BandParams, SequenceBand};
use crate::error::{Error, Result};
use crate::intervals::IntervalUnion;
use crate::quantile::{fit_isotonic_quantile, IsotonicFit, QuantileLevel};

/// Paired observations `(x, y)` with `x` in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct DesignData {
    pub points: Vec<(f64, f64)>,
}

impl DesignData {
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self> {
        for (i, &(x, y)) in points.iter().enumerate() {
            if !x.is_finite() || !y.is_finite() {
                return Err(Error::NonFinite(i));
            }
            if !(0.0..=1.0).contains(&x) {
                return Err(Error::OutOfDomain(x));
            }
        }
        Ok(Self { points })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Indices sorted by `x`, ties kept in input order.
    pub fn order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.points.len()).collect();
        order.sort_by(|&a, &b| self.points[a].0.total_cmp(&self.points[b].0));
        order
    }
}

/// Monotone step functions `L <= U` on `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandFunction {
    xs: Vec<f64>,
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl BandFunction {
    /// Builds a band function from values at sorted design points.
    pub fn from_parts(xs: Vec<f64>, lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if xs.len() != lower.len() {
            return Err(Error::LengthMismatch {
                expected: xs.len(),
                got: lower.len(),
            });
        }
        if xs.len() != upper.len() {
            return Err(Error::LengthMismatch {
                expected: xs.len(),
                got: upper.len(),
            });
        }
        if let Some(&x) = xs.iter().find(|x| !(0.0..=1.0).contains(*x)) {
            return Err(Error::OutOfDomain(x));
        }
        for (name, seq) in [
            ("design points", &xs),
            ("lower band", &lower),
            ("upper band", &upper),
        ] {
            if let Some(i) = seq.windows(2).position(|w| !(w[0] <= w[1])) {
                return Err(Error::InvalidParameter(format!(
                    "{name} decrease at index {}",
                    i + 1
                )));
            }
        }
        let in_unit = |v: &f64| (0.0..=1.0).contains(v);
        if !lower.iter().all(in_unit) || !upper.iter().all(in_unit) {
            return Err(Error::InvalidParameter(
                "band values must lie in [0, 1]".into(),
            ));
        }
        if lower.iter().zip(&upper).any(|(l, u)| l > u) {
            return Err(Error::InvalidParameter(
                "lower band exceeds upper band".into(),
            ));
        }
        Ok(Self { xs, lower, upper })
    }

    /// `L = lower` and `U = upper` on all of `[0, 1]`.
    pub fn constant(lower: f64, upper: f64) -> Result<Self> {
        Self::from_parts(vec![0.0, 1.0], vec![lower; 2], vec![upper; 2])
    }

    /// Sorted design points; every jump of `U` or `L` happens at one of these.
    pub fn breakpoints(&self) -> &[f64] {
        &self.xs
    }

    pub fn lower_values(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper_values(&self) -> &[f64] {
        &self.upper
    }

    /// `(L(x), U(x))`, rejecting points outside `[0, 1]`.
    pub fn eval(&self, x: f64) -> Result<(f64, f64)> {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::OutOfDomain(x));
        }
        Ok(self.eval_unchecked(x))
    }

    pub(crate) fn eval_unchecked(&self, x: f64) -> (f64, f64) {
        let plus = self.xs.partition_point(|&xi| xi < x);
        let upper = self.upper.get(plus).copied().unwrap_or(1.0);
        let minus = self.xs.partition_point(|&xi| xi <= x);
        let lower = if minus == 0 {
            0.0
        } else {
            self.lower[minus - 1]
        };
        (lower, upper)
    }

    /// Exact integral of `U - L` over `[a, b)`.
    fn integrate_width(&self, a: f64, b: f64) -> f64 {
        let lo = self.xs.partition_point(|&x| x <= a);
        let hi = self.xs.partition_point(|&x| x < b);
        let mut total = 0.0;
        let mut left = a;
        for &cut in self.xs[lo..hi].iter().chain(std::iter::once(&b)) {
            if cut <= left {
                continue;
            }
            let (l, u) = self.eval_unchecked(left + (cut - left) / 2.0);
            total += (u - l) * (cut - left);
            left = cut;
        }
        total
    }

    /// Average of `U - L` over `region` with respect to Lebesgue measure.
    pub fn average_width(&self, region: &IntervalUnion) -> Result<f64> {
        let measure = region.measure();
        if !(measure > 0.0) {
            return Err(Error::EmptyRegion);
        }
        let total: f64 = region
            .parts()
            .iter()
            .map(|&(a, b)| self.integrate_width(a, b))
            .sum();
        Ok(total / measure)
    }
}

/// A band function together with the intermediate fit and sequence band.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FittedBand {
    pub band: BandFunction,
    /// Isotonic fit of the responses taken in increasing-`x` order.
    pub fit: IsotonicFit,
    pub sequence: SequenceBand,
    /// Input indices in increasing-`x` order.
    pub order: Vec<usize>,
}

/// Fits the isotonic quantile on `[0, 1]` and interpolates its sequence band.
pub fn fit_band_function(
    data: &DesignData,
    tau: QuantileLevel,
    params: &BandParams,
) -> Result<FittedBand> {
    if data.len() < 3 {
        return Err(Error::TooFewObservations(data.len()));
    }
    let order = data.order();
    let xs: Vec<f64> = order.iter().map(|&i| data.points[i].0).collect();
    let v: Vec<f64> = order.iter().map(|&i| data.points[i].1).collect();
    let fit = fit_isotonic_quantile(&v, tau, 0.0, 1.0)?;
    let sequence = band_sequence(&fit, params)?;
    let band = BandFunction {
        xs,
        lower: sequence.lower.clone(),
        upper: sequence.upper.clone(),
    };
    Ok(FittedBand {
        band,
        fit,
        sequence,
        order,
    })
}

pub fn build_band_function(
    data: &DesignData,
    tau: QuantileLevel,
    params: &BandParams,
) -> Result<BandFunction> {
    fit_band_function(data, tau, params).map(|f| f.band)
}
