use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::config::{BandSetting, ExperimentConfig};
use super::report::{aggregate, log_log_slope, ExperimentReport, RawRow};
use super::HarnessError;
use crate::band::{band_sequence, check_coverage, NoiseGrowthParams, SequenceBand};
use crate::envs::generate_sequence_sample;
use crate::policy::{run_policy, PolicyConfig};
use crate::quantile::{fit_isotonic_quantile, IsotonicFit};

pub const DEFAULT_SIZES: [usize; 5] = [250, 500, 1000, 2000, 4000];
pub const DEFAULT_HORIZONS: [usize; 3] = [1000, 4000, 16000];

/// Replication `rep` at the `size_index`-th size gets its own ChaCha stream.
pub fn replication_rng(seed: u64, size_index: usize, rep: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(replication_stream(size_index, rep));
    rng
}

fn replication_stream(size_index: usize, rep: usize) -> u64 {
    ((size_index as u64) << 32) | rep as u64
}

type Metrics = Vec<(String, f64)>;

/// Runs `body` for every `(size, replication)` in parallel and flattens the
/// metrics into rows ordered by size, then replication.
fn replicate<F>(sizes: &[usize], reps: usize, body: F) -> Result<Vec<RawRow>, HarnessError>
where
    F: Fn(usize, usize, usize) -> Result<Metrics, HarnessError> + Sync,
{
    let jobs: Vec<(usize, usize)> = (0..sizes.len())
        .flat_map(|s| (0..reps).map(move |r| (s, r)))
        .collect();
    let results: Vec<Result<Metrics, HarnessError>> = jobs
        .par_iter()
        .map(|&(s, r)| body(s, sizes[s], r))
        .collect();
    let mut rows = Vec::new();
    for (&(s, r), metrics) in jobs.iter().zip(results) {
        for (metric, value) in metrics? {
            rows.push(RawRow {
                size: sizes[s],
                replication: r,
                metric,
                value,
            });
        }
    }
    Ok(rows)
}

pub(crate) fn finish(
    config: &ExperimentConfig,
    rows: Vec<RawRow>,
    slope_metrics: &[&str],
    start: std::time::Instant,
) -> ExperimentReport {
    let cells = aggregate(&rows);
    let slopes = slope_metrics
        .iter()
        .filter_map(|m| log_log_slope(&cells, m))
        .collect();
    ExperimentReport {
        experiment: config.experiment,
        version: env!("CARGO_PKG_VERSION").to_string(),
        illustrative: config.illustrative(),
        config: config.clone(),
        cells,
        slopes,
        rows,
        wall_clock_secs: start.elapsed().as_secs_f64(),
    }
}

/// One fixed-design replication: data, fit, band and the true tau-quantile sequence.
pub(crate) struct SequenceRun {
    pub y: Vec<f64>,
    pub theta_tau: Vec<f64>,
    pub fit: IsotonicFit,
    pub band: SequenceBand,
}

pub(crate) fn sequence_run(
    config: &ExperimentConfig,
    n: usize,
    rng: &mut ChaCha8Rng,
) -> Result<SequenceRun, HarnessError> {
    let tau = config.tau_level()?;
    let params = config.band_params()?;
    let sample = generate_sequence_sample(&config.truth, &config.noise, n, rng)?;
    let shift = config.noise.quantile(tau);
    let theta_tau = sample.theta_star.iter().map(|t| t + shift).collect();
    let fit = fit_isotonic_quantile(&sample.y, tau, 0.0, 1.0)?;
    let band = band_sequence(&fit, &params)?;
    Ok(SequenceRun {
        y: sample.y,
        theta_tau,
        fit,
        band,
    })
}

/// Simultaneous coverage of the true tau-quantile sequence.
pub fn coverage_experiment(config: &ExperimentConfig) -> Result<ExperimentReport, HarnessError> {
    config.validate()?;
    let start = std::time::Instant::now();
    let sizes = config.sizes_or(&[500]);
    let rows = replicate(&sizes, config.replications, |s, n, rep| {
        let mut rng = replication_rng(config.seed, s, rep);
        let run = sequence_run(config, n, &mut rng)?;
        let covered = check_coverage(&run.band, &run.theta_tau)?;
        Ok(vec![
            ("covered".into(), f64::from(u8::from(covered))),
            ("width".into(), run.band.mean_width()),
            (
                "good_fraction".into(),
                run.band.good_set.len() as f64 / n as f64,
            ),
        ])
    })?;
    Ok(finish(config, rows, &[], start))
}

/// Average band width per sample size, with its log-log slope.
pub fn width_experiment(config: &ExperimentConfig) -> Result<ExperimentReport, HarnessError> {
    config.validate()?;
    let start = std::time::Instant::now();
    let sizes = config.sizes_or(&DEFAULT_SIZES);
    let rows = replicate(&sizes, config.replications, |s, n, rep| {
        let mut rng = replication_rng(config.seed, s, rep);
        let run = sequence_run(config, n, &mut rng)?;
        Ok(vec![
            ("width".into(), run.band.mean_width()),
            ("pieces".into(), run.fit.count_pieces() as f64),
        ])
    })?;
    Ok(finish(config, rows, &["width", "pieces"], start))
}

/// Number of constant pieces of the fit per sample size.
pub fn pieces_experiment(config: &ExperimentConfig) -> Result<ExperimentReport, HarnessError> {
    config.validate()?;
    let start = std::time::Instant::now();
    let sizes = config.sizes_or(&DEFAULT_SIZES);
    let tau = config.tau_level()?;
    let rows = replicate(&sizes, config.replications, |s, n, rep| {
        let mut rng = replication_rng(config.seed, s, rep);
        let sample = generate_sequence_sample(&config.truth, &config.noise, n, &mut rng)?;
        let pieces = fit_isotonic_quantile(&sample.y, tau, 0.0, 1.0)?.count_pieces() as f64;
        Ok(vec![
            ("pieces".into(), pieces),
            ("pieces_per_log_n".into(), pieces / (n as f64).ln()),
        ])
    })?;
    Ok(finish(config, rows, &["pieces"], start))
}

/// Policy configuration for one horizon and replication.
pub fn policy_config(
    config: &ExperimentConfig,
    horizon: usize,
    stream: u64,
) -> Result<PolicyConfig, HarnessError> {
    // Unused when the band is explicit.
    let growth = config.growth()?.unwrap_or(NoiseGrowthParams {
        c_tilde: 1.0,
        l_cap: 1.0,
    });
    let mut policy = PolicyConfig::new(horizon, growth, config.seed);
    policy.alpha_override = config.alpha;
    policy.min_fit_points = config.min_fit_points;
    policy.stream = stream;
    if let BandSetting::Explicit { gamma1, gamma2 } = config.band {
        policy.gamma_override = Some((gamma1, gamma2));
    }
    Ok(policy)
}

/// Cumulative pseudo-regret per horizon, the uncertain-region measure after
/// each epoch, and whether it never increased.
pub fn regret_experiment(config: &ExperimentConfig) -> Result<ExperimentReport, HarnessError> {
    config.validate()?;
    let start = std::time::Instant::now();
    let env = config.environment()?;
    let horizons = config.sizes_or(&DEFAULT_HORIZONS);
    let rows = replicate(&horizons, config.replications, |s, t, rep| {
        let policy = policy_config(config, t, replication_stream(s, rep))?;
        let trace = run_policy(&env, &policy)?;
        let unc: Vec<f64> = trace.epochs.iter().map(|e| e.unc_measure).collect();
        let monotone = unc.windows(2).all(|w| w[1] <= w[0]);
        let mut metrics = vec![
            ("regret".to_string(), trace.total_regret()),
            ("unc_final".to_string(), unc.last().copied().unwrap_or(1.0)),
            ("unc_monotone".to_string(), f64::from(u8::from(monotone))),
            (
                "epochs_fired".to_string(),
                trace.epochs.iter().filter(|e| e.fired).count() as f64,
            ),
        ];
        metrics.extend(
            unc.iter()
                .enumerate()
                .map(|(i, &m)| (format!("unc_epoch_{}", i + 1), m)),
        );
        Ok(metrics)
    })?;
    Ok(finish(config, rows, &["regret"], start))
}
