//! Finite disjoint unions of half-open subintervals of `[0, 1)`.
//!
//! Every interval is `[a, b)`. Representations are canonical: parts are
//! sorted, non-empty, and separated by a positive gap, so equal sets compare
//! equal.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::band_fun::BandFunction;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct IntervalUnion {
    parts: Vec<(f64, f64)>,
}

impl IntervalUnion {
    pub fn empty() -> Self {
        Self { parts: Vec::new() }
    }

    /// `[0, 1)`.
    pub fn full() -> Self {
        Self {
            parts: vec![(0.0, 1.0)],
        }
    }

    /// Single interval `[a, b)` clipped to `[0, 1)`.
    pub fn interval(a: f64, b: f64) -> Self {
        Self::from_parts(vec![(a, b)])
    }

    /// Normalizes an arbitrary list of intervals: clips to `[0, 1]`, drops
    /// empty pieces, and merges overlapping or touching ones.
    pub fn from_parts(mut parts: Vec<(f64, f64)>) -> Self {
        parts.retain(|(a, b)| a.is_finite() && b.is_finite());
        for p in parts.iter_mut() {
            p.0 = p.0.clamp(0.0, 1.0);
            p.1 = p.1.clamp(0.0, 1.0);
        }
        parts.retain(|(a, b)| a < b);
        parts.sort_by(|x, y| x.0.total_cmp(&y.0));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(parts.len());
        for (a, b) in parts {
            match merged.last_mut() {
                Some(last) if a <= last.1 => last.1 = last.1.max(b),
                _ => merged.push((a, b)),
            }
        }
        Self { parts: merged }
    }

    pub fn parts(&self) -> &[(f64, f64)] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Lebesgue measure.
    pub fn measure(&self) -> f64 {
        self.parts.iter().map(|(a, b)| b - a).sum()
    }

    /// Half-open membership.
    pub fn contains(&self, x: f64) -> bool {
        // First part whose right end lies beyond x.
        let idx = self.parts.partition_point(|&(_, b)| b <= x);
        self.parts.get(idx).is_some_and(|&(a, b)| a <= x && x < b)
    }

    pub fn intersect(&self, other: &Self) -> Self {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.parts.len() && j < other.parts.len() {
            let (a1, b1) = self.parts[i];
            let (a2, b2) = other.parts[j];
            let a = a1.max(a2);
            let b = b1.min(b2);
            if a < b {
                out.push((a, b));
            }
            if b1 < b2 {
                i += 1;
            } else {
                j += 1;
            }
        }
        Self::from_parts(out)
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut parts = self.parts.clone();
        parts.extend_from_slice(&other.parts);
        Self::from_parts(parts)
    }

    /// Complement within `[0, 1)`.
    pub fn complement(&self) -> Self {
        let mut out = Vec::with_capacity(self.parts.len() + 1);
        let mut cursor = 0.0;
        for &(a, b) in &self.parts {
            if cursor < a {
                out.push((cursor, a));
            }
            cursor = b;
        }
        if cursor < 1.0 {
            out.push((cursor, 1.0));
        }
        Self { parts: out }
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.intersect(&other.complement())
    }

    /// Uniform draw from the union by inverse CDF over the concatenated parts.
    pub fn sample_uniform<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<f64> {
        let total = self.measure();
        if !(total > 0.0) {
            return Err(Error::EmptyRegion);
        }
        let u: f64 = rng.random();
        Ok(self.locate(u * total))
    }

    /// Point at cumulative length `s` from the left, kept inside its part.
    fn locate(&self, s: f64) -> f64 {
        let mut remaining = s;
        for &(a, b) in &self.parts {
            let len = b - a;
            if remaining < len {
                let x = a + remaining;
                return if x < b { x } else { a };
            }
            remaining -= len;
        }
        // Rounding pushed s past the total length; fall back to the last part.
        let (a, b) = *self.parts.last().expect("non-empty union");
        let x = b - (b - a) * f64::EPSILON;
        if x >= a && x < b {
            x
        } else {
            a
        }
    }
}

/// The certified and still-uncertain parts of `within` for two arms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionSplit {
    /// Where arm 0's lower band exceeds arm 1's upper band.
    pub cert0: IntervalUnion,
    /// Where arm 1's lower band exceeds arm 0's upper band.
    pub cert1: IntervalUnion,
    pub unc: IntervalUnion,
}

/// Splits `within` by comparing two band functions.
///
/// `within` is refined at every breakpoint of either band; all four step
/// functions are constant on each open cell, so each half-open cell is
/// classified by its midpoint.
pub fn regions_from_band_comparison(
    f0: &BandFunction,
    f1: &BandFunction,
    within: &IntervalUnion,
) -> RegionSplit {
    let mut breakpoints: Vec<f64> = f0
        .breakpoints()
        .iter()
        .chain(f1.breakpoints())
        .copied()
        .collect();
    breakpoints.sort_by(f64::total_cmp);
    breakpoints.dedup();

    let (mut cert0, mut cert1, mut unc) = (Vec::new(), Vec::new(), Vec::new());
    for &(a, b) in within.parts() {
        let lo = breakpoints.partition_point(|&x| x <= a);
        let hi = breakpoints.partition_point(|&x| x < b);
        let mut left = a;
        for &cut in breakpoints[lo..hi].iter().chain(std::iter::once(&b)) {
            if cut <= left {
                continue;
            }
            let mid = left + (cut - left) / 2.0;
            let (l0, u0) = f0.eval_unchecked(mid);
            let (l1, u1) = f1.eval_unchecked(mid);
            if l0 > u1 {
                cert0.push((left, cut));
            } else if l1 > u0 {
                cert1.push((left, cut));
            } else {
                unc.push((left, cut));
            }
            left = cut;
        }
    }
    RegionSplit {
        cert0: IntervalUnion::from_parts(cert0),
        cert1: IntervalUnion::from_parts(cert1),
        unc: IntervalUnion::from_parts(unc),
    }
}
