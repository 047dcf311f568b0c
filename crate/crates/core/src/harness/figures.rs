use serde::{Deserialize, Serialize};

use super::config::{BandSetting, ExperimentConfig};
use super::experiments::{finish, replication_rng, sequence_run};
use super::report::{ExperimentReport, RawRow};
use super::{HarnessError, PointRow, Table};
use crate::band::check_coverage;
use crate::envs::{ErrorDistSpec, MonotoneFunctionSpec};
use crate::quantile::fit_isotonic_mean;

/// Scatter points beyond this magnitude are left out of the display column.
pub const DISPLAY_LIMIT: f64 = 10.0;
pub const FIGURE_N: usize = 500;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FigureSpec {
    pub name: String,
    pub truth: MonotoneFunctionSpec,
    pub noise: ErrorDistSpec,
    pub tau: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    /// Adds an isotonic least-squares fit on the same data.
    pub with_lse: bool,
}

/// The reference figure settings. The last figure has
/// two panes, so there are six entries.
pub fn figure_specs() -> Vec<FigureSpec> {
    let gaussian = ErrorDistSpec::Gaussian { sigma: 0.1 };
    let cauchy = ErrorDistSpec::Cauchy { scale: 0.1 };
    let steps = MonotoneFunctionSpec::floor_steps(0.1, 0.2, 5);
    let spec =
        |name: &str, truth: &MonotoneFunctionSpec, noise, tau, g1, g2, with_lse| FigureSpec {
            name: name.to_string(),
            truth: truth.clone(),
            noise,
            tau,
            gamma1: g1,
            gamma2: g2,
            with_lse,
        };
    let identity = MonotoneFunctionSpec::linear(0.0, 1.0);
    vec![
        spec(
            "figure1_gaussian_linear",
            &identity,
            gaussian,
            0.5,
            0.5,
            0.5,
            false,
        ),
        spec(
            "figure2_gaussian_steps",
            &steps,
            gaussian,
            0.5,
            0.5,
            0.5,
            false,
        ),
        spec(
            "figure3_cauchy_linear",
            &identity,
            cauchy,
            0.5,
            0.5,
            0.5,
            false,
        ),
        spec(
            "figure4_lse_vs_median",
            &identity,
            cauchy,
            0.5,
            0.5,
            0.5,
            true,
        ),
        spec(
            "figure5_cauchy_q70_linear",
            &MonotoneFunctionSpec::linear(0.1, 0.8),
            cauchy,
            0.7,
            1.0,
            0.75,
            false,
        ),
        spec(
            "figure5_cauchy_q70_steps",
            &steps,
            cauchy,
            0.7,
            1.0,
            0.75,
            false,
        ),
    ]
}

/// Rows of one replication and, for replication 0, its point table.
type Replication = (Vec<RawRow>, Option<Table>);

fn max_abs_dev(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Runs every figure setting for `config.replications` replications. Per
/// replication it records coverage of the true quantile sequence and the
/// maximum deviation of the fit from it (and of the least-squares fit for the
/// comparison figure). Tables hold replication 0 of each figure.
pub fn figures_reproduction(
    config: &ExperimentConfig,
) -> Result<(ExperimentReport, Vec<Table>), HarnessError> {
    config.validate()?;
    let start = std::time::Instant::now();
    let n = config.sizes.first().copied().unwrap_or(FIGURE_N);
    let mut rows = Vec::new();
    let mut tables = Vec::new();
    for (index, figure) in figure_specs().into_iter().enumerate() {
        let mut sub = config.clone();
        sub.truth = figure.truth.clone();
        sub.noise = figure.noise;
        sub.tau = figure.tau;
        sub.band = BandSetting::Explicit {
            gamma1: figure.gamma1,
            gamma2: figure.gamma2,
        };
        let reps: Vec<Result<Replication, HarnessError>> = {
            use rayon::prelude::*;
            (0..config.replications)
                .into_par_iter()
                .map(|rep| figure_replication(&sub, &figure, index, n, rep))
                .collect()
        };
        for rep in reps {
            let (rep_rows, table) = rep?;
            rows.extend(rep_rows);
            tables.extend(table);
        }
    }
    let mut report = finish(config, rows, &[], start);
    report.illustrative = true;
    Ok((report, tables))
}

fn figure_replication(
    config: &ExperimentConfig,
    figure: &FigureSpec,
    index: usize,
    n: usize,
    rep: usize,
) -> Result<Replication, HarnessError> {
    let mut rng = replication_rng(config.seed, index, rep);
    let run = sequence_run(config, n, &mut rng)?;
    let fit = run.fit.theta_hat();
    let lse = if figure.with_lse {
        Some(fit_isotonic_mean(&run.y)?.theta_hat().to_vec())
    } else {
        None
    };

    let row = |metric: &str, value: f64| RawRow {
        size: n,
        replication: rep,
        metric: format!("{}.{metric}", figure.name),
        value,
    };
    let covered = check_coverage(&run.band, &run.theta_tau)?;
    let median_dev = max_abs_dev(fit, &run.theta_tau);
    let mut rows = vec![
        row("covered", f64::from(u8::from(covered))),
        row("width", run.band.mean_width()),
        row("fit_max_dev", median_dev),
    ];
    if let Some(lse) = &lse {
        let lse_dev = max_abs_dev(lse, &run.theta_tau);
        rows.push(row("lse_max_dev", lse_dev));
        rows.push(row(
            "median_beats_lse",
            f64::from(u8::from(median_dev < lse_dev)),
        ));
    }

    let table = (rep == 0).then(|| {
        let points = (0..n)
            .map(|i| PointRow {
                index: i + 1,
                x: (i + 1) as f64 / n as f64,
                y: run.y[i],
                y_display: (run.y[i].abs() <= DISPLAY_LIMIT).then_some(run.y[i]),
                truth: Some(run.theta_tau[i]),
                fit: fit[i],
                lower: Some(run.band.lower[i]),
                upper: Some(run.band.upper[i]),
                lse: lse.as_ref().map(|l| l[i]),
            })
            .collect();
        Table {
            name: figure.name.clone(),
            rows: points,
        }
    });
    Ok((rows, table))
}
