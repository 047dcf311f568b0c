//! Monte-Carlo experiment drivers and their CSV/JSON output.
//!
//! Every experiment validates its [`ExperimentConfig`] first, runs independent
//! replications in parallel on per-replication ChaCha streams, and returns an
//! [`ExperimentReport`] whose cells are recomputable from its raw rows.

mod config;
mod experiments;
mod figures;
mod report;

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

pub use config::{BandSetting, ExperimentConfig, ExperimentKind, OutputFormat, DEFAULT_ALPHA};
pub use experiments::{
    coverage_experiment, pieces_experiment, policy_config, regret_experiment, replication_rng,
    width_experiment, DEFAULT_HORIZONS, DEFAULT_SIZES,
};
pub use figures::{figure_specs, figures_reproduction, FigureSpec, DISPLAY_LIMIT, FIGURE_N};
pub use report::{aggregate, log_log_slope, ols, Cell, ExperimentReport, RawRow, Slope};

use crate::band::check_coverage;
use crate::band_fun::{fit_band_function, DesignData};
use crate::quantile::fit_isotonic_quantile;

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("config error: {0}")]
    Config(String),
    #[error("runtime error: {0}")]
    Runtime(String),
}

impl HarnessError {
    /// 2 for configuration problems, 3 for failures while running.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) => 2,
            Self::Runtime(_) => 3,
        }
    }
}

impl From<crate::error::Error> for HarnessError {
    fn from(e: crate::error::Error) -> Self {
        Self::Runtime(e.to_string())
    }
}

impl From<std::io::Error> for HarnessError {
    fn from(e: std::io::Error) -> Self {
        Self::Runtime(e.to_string())
    }
}

impl From<csv::Error> for HarnessError {
    fn from(e: csv::Error) -> Self {
        Self::Runtime(e.to_string())
    }
}

/// One design point of a fitted data set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointRow {
    /// 1-based position in increasing-`x` order.
    pub index: usize,
    pub x: f64,
    pub y: f64,
    /// `y` when within the display window, empty otherwise.
    pub y_display: Option<f64>,
    pub truth: Option<f64>,
    pub fit: f64,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    /// Isotonic least-squares fit, where requested.
    pub lse: Option<f64>,
}

/// A named point table, written as `<name>.csv`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub name: String,
    pub rows: Vec<PointRow>,
}

impl Table {
    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<(), HarnessError> {
        let mut w = csv::Writer::from_writer(out);
        for row in &self.rows {
            w.serialize(row)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// An experiment's report and any point tables it produced.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub report: ExperimentReport,
    pub tables: Vec<Table>,
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<RunOutput, HarnessError> {
    let (report, tables) = match config.experiment {
        ExperimentKind::Fit | ExperimentKind::Band => fit_data(config)?,
        ExperimentKind::Coverage => (coverage_experiment(config)?, Vec::new()),
        ExperimentKind::Width => (width_experiment(config)?, Vec::new()),
        ExperimentKind::Pieces => (pieces_experiment(config)?, Vec::new()),
        ExperimentKind::Bandit => (regret_experiment(config)?, Vec::new()),
        ExperimentKind::Figures => figures_reproduction(config)?,
    };
    Ok(RunOutput { report, tables })
}

/// Reads `(x, y)` or `y`-only data from a CSV file with a header row.
pub fn read_data(path: &Path) -> Result<(Option<Vec<f64>>, Vec<f64>), HarnessError> {
    let config_err = |msg: String| HarnessError::Config(format!("{}: {msg}", path.display()));
    let mut reader = csv::Reader::from_path(path).map_err(|e| config_err(e.to_string()))?;
    let headers = reader
        .headers()
        .map_err(|e| config_err(e.to_string()))?
        .clone();
    let column = |name: &str| headers.iter().position(|h| h.trim() == name);
    let y_col = column("y").ok_or_else(|| config_err("missing `y` column".into()))?;
    let x_col = column("x");
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| config_err(e.to_string()))?;
        let parse = |col: usize| -> Result<f64, HarnessError> {
            record
                .get(col)
                .and_then(|v| v.trim().parse().ok())
                .ok_or_else(|| {
                    config_err(format!(
                        "row {} has no number in column {}",
                        line + 1,
                        col + 1
                    ))
                })
        };
        ys.push(parse(y_col)?);
        if let Some(c) = x_col {
            xs.push(parse(c)?);
        }
    }
    Ok((x_col.map(|_| xs), ys))
}

/// `fit` and `band` on one data set: read from `config.input`, or simulated
/// from the fixed-design model with `n = sizes[0]` (default 500).
fn fit_data(config: &ExperimentConfig) -> Result<(ExperimentReport, Vec<Table>), HarnessError> {
    config.validate()?;
    let start = std::time::Instant::now();
    let with_band = config.experiment == ExperimentKind::Band;
    let tau = config.tau_level()?;
    let params = config.band_params()?;

    let (xs, ys, truth) = match &config.input {
        Some(path) => {
            let (xs, ys) = read_data(path)?;
            (xs, ys, None)
        }
        None => {
            let n = config.sizes.first().copied().unwrap_or(FIGURE_N);
            let mut rng = replication_rng(config.seed, 0, 0);
            let sample =
                crate::envs::generate_sequence_sample(&config.truth, &config.noise, n, &mut rng)?;
            let shift = config.noise.quantile(tau);
            let truth = sample
                .theta_star
                .iter()
                .map(|t| t + shift)
                .collect::<Vec<_>>();
            (None, sample.y, Some(truth))
        }
    };
    let n = ys.len();
    if with_band && n < 3 {
        return Err(HarnessError::Config(format!(
            "band needs at least 3 observations, got {n}"
        )));
    }

    let mut points = Vec::with_capacity(n);
    let mut metrics = Vec::new();
    match xs {
        Some(xs) => {
            let data = DesignData::new(xs.into_iter().zip(ys).collect())
                .map_err(|e| HarnessError::Config(e.to_string()))?;
            let (fit, band) = if with_band {
                let fitted = fit_band_function(&data, tau, &params)?;
                (fitted.fit, Some(fitted.sequence))
            } else {
                let order = data.order();
                let v: Vec<f64> = order.iter().map(|&i| data.points[i].1).collect();
                (fit_isotonic_quantile(&v, tau, 0.0, 1.0)?, None)
            };
            for (j, &i) in data.order().iter().enumerate() {
                let (x, y) = data.points[i];
                points.push(point(
                    j,
                    x,
                    y,
                    None,
                    fit.theta_hat()[j],
                    band.as_ref().map(|b| (b.lower[j], b.upper[j])),
                ));
            }
            metrics.push(("pieces", fit.count_pieces() as f64));
            if let Some(b) = &band {
                metrics.push(("width", b.mean_width()));
            }
        }
        None => {
            let fit = fit_isotonic_quantile(&ys, tau, 0.0, 1.0)?;
            let band = if with_band {
                Some(crate::band::band_sequence(&fit, &params)?)
            } else {
                None
            };
            for j in 0..n {
                let x = (j + 1) as f64 / n as f64;
                let t = truth.as_ref().map(|t| t[j]);
                points.push(point(
                    j,
                    x,
                    ys[j],
                    t,
                    fit.theta_hat()[j],
                    band.as_ref().map(|b| (b.lower[j], b.upper[j])),
                ));
            }
            metrics.push(("pieces", fit.count_pieces() as f64));
            if let Some(b) = &band {
                metrics.push(("width", b.mean_width()));
                if let Some(t) = &truth {
                    metrics.push(("covered", f64::from(u8::from(check_coverage(b, t)?))));
                }
            }
        }
    }
    let rows = metrics
        .into_iter()
        .map(|(metric, value)| RawRow {
            size: n,
            replication: 0,
            metric: metric.to_string(),
            value,
        })
        .collect();
    let report = experiments::finish(config, rows, &[], start);
    let table = Table {
        name: config.experiment.name().to_string(),
        rows: points,
    };
    Ok((report, vec![table]))
}

fn point(
    j: usize,
    x: f64,
    y: f64,
    truth: Option<f64>,
    fit: f64,
    band: Option<(f64, f64)>,
) -> PointRow {
    PointRow {
        index: j + 1,
        x,
        y,
        y_display: (y.abs() <= DISPLAY_LIMIT).then_some(y),
        truth,
        fit,
        lower: band.map(|b| b.0),
        upper: band.map(|b| b.1),
        lse: None,
    }
}

/// Writes `<kind>_rows.csv`, `<kind>_cells.csv`, `<kind>_summary.json` and
/// one CSV per table into `dir`.
pub fn write_outputs(output: &RunOutput, dir: &Path) -> Result<(), HarnessError> {
    fs::create_dir_all(dir)?;
    let kind = output.report.experiment.name();
    output
        .report
        .write_rows_csv(fs::File::create(dir.join(format!("{kind}_rows.csv")))?)?;
    output
        .report
        .write_cells_csv(fs::File::create(dir.join(format!("{kind}_cells.csv")))?)?;
    output
        .report
        .write_json(fs::File::create(dir.join(format!("{kind}_summary.json")))?)?;
    for table in &output.tables {
        table.write_csv(fs::File::create(dir.join(format!("{}.csv", table.name)))?)?;
    }
    Ok(())
}
