use std::io::Write;

use serde::{Deserialize, Serialize};

use super::config::{ExperimentConfig, ExperimentKind};
use super::HarnessError;

/// One metric value from one replication.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawRow {
    pub size: usize,
    pub replication: usize,
    pub metric: String,
    pub value: f64,
}

/// Mean and standard error of one metric at one size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub size: usize,
    pub metric: String,
    pub mean: f64,
    /// Sample standard deviation over `sqrt(count)`; 0 for a single replication.
    pub std_error: f64,
    pub count: usize,
}

/// Least-squares slope of `ln(mean)` against `ln(size)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Slope {
    pub metric: String,
    pub slope: f64,
    pub intercept: f64,
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub experiment: ExperimentKind,
    pub version: String,
    /// Set when the band parameters were given explicitly rather than derived
    /// from the noise law, so no nominal coverage is claimed.
    pub illustrative: bool,
    pub config: ExperimentConfig,
    pub cells: Vec<Cell>,
    pub slopes: Vec<Slope>,
    pub rows: Vec<RawRow>,
    pub wall_clock_secs: f64,
}

impl ExperimentReport {
    pub fn cell(&self, metric: &str, size: usize) -> Option<&Cell> {
        self.cells
            .iter()
            .find(|c| c.metric == metric && c.size == size)
    }

    pub fn slope(&self, metric: &str) -> Option<f64> {
        self.slopes
            .iter()
            .find(|s| s.metric == metric)
            .map(|s| s.slope)
    }

    /// Cell means of `metric` in size order.
    pub fn means(&self, metric: &str) -> Vec<(usize, f64)> {
        let mut out: Vec<(usize, f64)> = self
            .cells
            .iter()
            .filter(|c| c.metric == metric)
            .map(|c| (c.size, c.mean))
            .collect();
        out.sort_by_key(|&(n, _)| n);
        out
    }

    pub fn rows_for<'a>(&'a self, metric: &'a str) -> impl Iterator<Item = &'a RawRow> {
        self.rows.iter().filter(move |r| r.metric == metric)
    }

    pub fn write_rows_csv<W: Write>(&self, out: W) -> Result<(), HarnessError> {
        let mut w = csv::Writer::from_writer(out);
        for row in &self.rows {
            w.serialize(row)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_cells_csv<W: Write>(&self, out: W) -> Result<(), HarnessError> {
        let mut w = csv::Writer::from_writer(out);
        for cell in &self.cells {
            w.serialize(cell)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_json<W: Write>(&self, out: W) -> Result<(), HarnessError> {
        serde_json::to_writer_pretty(out, self).map_err(|e| HarnessError::Runtime(e.to_string()))
    }
}

/// Groups rows by `(metric, size)` in first-appearance order.
pub fn aggregate(rows: &[RawRow]) -> Vec<Cell> {
    let mut keys: Vec<(&str, usize)> = Vec::new();
    for r in rows {
        if !keys.contains(&(r.metric.as_str(), r.size)) {
            keys.push((r.metric.as_str(), r.size));
        }
    }
    keys.into_iter()
        .map(|(metric, size)| {
            let values: Vec<f64> = rows
                .iter()
                .filter(|r| r.metric == metric && r.size == size)
                .map(|r| r.value)
                .collect();
            let count = values.len();
            let mean = values.iter().sum::<f64>() / count as f64;
            let std_error = if count > 1 {
                let var =
                    values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (count - 1) as f64;
                (var / count as f64).sqrt()
            } else {
                0.0
            };
            Cell {
                size,
                metric: metric.to_string(),
                mean,
                std_error,
                count,
            }
        })
        .collect()
}

/// Ordinary least squares fit of `y = intercept + slope * x`.
pub fn ols(points: &[(f64, f64)]) -> Option<(f64, f64)> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    Some((slope, my - slope * mx))
}

/// Log-log slope of a metric's cell means; `None` with fewer than two
/// distinct sizes or a non-positive mean.
pub fn log_log_slope(cells: &[Cell], metric: &str) -> Option<Slope> {
    let points: Vec<(f64, f64)> = cells
        .iter()
        .filter(|c| c.metric == metric)
        .map(|c| ((c.size as f64).ln(), c.mean.ln()))
        .collect();
    if points.iter().any(|p| !p.1.is_finite()) {
        return None;
    }
    let (slope, intercept) = ols(&points)?;
    Some(Slope {
        metric: metric.to_string(),
        slope,
        intercept,
        points: points.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(size: usize, replication: usize, metric: &str, value: f64) -> RawRow {
        RawRow {
            size,
            replication,
            metric: metric.into(),
            value,
        }
    }

    #[test]
    fn aggregate_mean_and_standard_error() {
        let rows = vec![
            row(10, 0, "m", 1.0),
            row(10, 1, "m", 3.0),
            row(20, 0, "m", 5.0),
        ];
        let cells = aggregate(&rows);
        assert_eq!(cells.len(), 2);
        assert_eq!(cells[0].mean, 2.0);
        // Sample sd sqrt(2), over sqrt(2).
        assert!((cells[0].std_error - 1.0).abs() < 1e-15);
        assert_eq!(cells[1].std_error, 0.0);
        assert_eq!(cells[1].count, 1);
    }

    #[test]
    fn ols_recovers_exact_line() {
        let pts: Vec<(f64, f64)> = (0..5).map(|i| (i as f64, 2.0 - 0.5 * i as f64)).collect();
        let (slope, intercept) = ols(&pts).unwrap();
        assert!((slope + 0.5).abs() < 1e-12 && (intercept - 2.0).abs() < 1e-12);
        assert!(ols(&pts[..1]).is_none());
    }

    #[test]
    fn power_law_slope() {
        let cells: Vec<Cell> = [100usize, 200, 400, 800]
            .iter()
            .map(|&n| Cell {
                size: n,
                metric: "w".into(),
                mean: 3.0 * (n as f64).powf(-1.0 / 3.0),
                std_error: 0.0,
                count: 1,
            })
            .collect();
        let s = log_log_slope(&cells, "w").unwrap();
        assert!((s.slope + 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(s.points, 4);
    }
}
