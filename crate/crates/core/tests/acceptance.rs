//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::time::{Duration, Instant};

use isoband::harness::{
    coverage_experiment, figures_reproduction, pieces_experiment, regret_experiment,
    width_experiment, BandSetting, ExperimentConfig, ExperimentKind, ExperimentReport,
};
use isoband::{
    dp_oracle_fit, fit_isotonic_quantile, generate_sequence_sample, objective,
    regions_from_band_comparison, run_policy, BandFunction, Environment, ErrorDistSpec,
    IntervalUnion, MonotoneFunctionSpec, NoiseGrowthParams, PolicyConfig, QuantileLevel,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    id: &'static str,
    pass: bool,
    detail: String,
}

fn outcome(id: &'static str, pass: bool, detail: String) -> Outcome {
    Outcome { id, pass, detail }
}

fn gaussian() -> ErrorDistSpec {
    ErrorDistSpec::Gaussian { sigma: 0.1 }
}

fn cauchy() -> ErrorDistSpec {
    ErrorDistSpec::Cauchy { scale: 0.1 }
}

fn steps(values: &[f64]) -> MonotoneFunctionSpec {
    let k = values.len();
    MonotoneFunctionSpec::PiecewiseConstant {
        breakpoints: (1..k).map(|j| j as f64 / k as f64).collect(),
        values: values.to_vec(),
    }
}

fn oracle_equivalence() -> Vec<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst: f64 = 0.0;
    for instance in 0..1000 {
        let n = rng.random_range(1..=12);
        let tau = QuantileLevel::new([0.3, 0.5, 0.7][instance % 3]).unwrap();
        let noise = if instance % 2 == 0 {
            gaussian()
        } else {
            cauchy()
        };
        let truth =
            MonotoneFunctionSpec::linear(rng.random_range(0.0..0.5), rng.random_range(0.0..0.5));
        let s = generate_sequence_sample(&truth, &noise, n, &mut rng).unwrap();
        let fit = fit_isotonic_quantile(&s.y, tau, 0.0, 1.0).unwrap();
        let pava = objective(&s.y, fit.theta_hat(), tau).unwrap();
        let dp = dp_oracle_fit(&s.y, tau, 0.0, 1.0).unwrap().objective;
        worst = worst.max((pava - dp).abs());
    }
    vec![outcome(
        "1",
        worst <= 1e-9,
        format!("PAVA vs DP oracle on 1000 instances: max objective gap {worst:.2e} (tol 1e-9)"),
    )]
}

/// Smallest and largest empirical tau-quantiles.
fn quantile_range(sample: &[f64], tau: f64) -> (f64, f64) {
    let mut s = sample.to_vec();
    s.sort_by(f64::total_cmp);
    let m = s.len();
    let t = tau * m as f64;
    let left = (t.ceil() as usize).clamp(1, m);
    let right = if t == t.floor() {
        (t as usize + 1).min(m)
    } else {
        left
    };
    (s[left - 1], s[right - 1])
}

fn sandwich() -> Vec<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let truths = [
        MonotoneFunctionSpec::linear(0.0, 1.0),
        MonotoneFunctionSpec::floor_steps(0.1, 0.2, 5),
    ];
    let (mut checked, mut violations) = (0usize, 0usize);
    for dataset in 0..200 {
        let tau = [0.3, 0.5, 0.7][dataset % 3];
        let noise = if dataset % 2 == 0 {
            gaussian()
        } else {
            cauchy()
        };
        let s =
            generate_sequence_sample(&truths[(dataset / 2) % 2], &noise, 200, &mut rng).unwrap();
        let fit = fit_isotonic_quantile(&s.y, QuantileLevel::new(tau).unwrap(), 0.0, 1.0).unwrap();
        for b in fit
            .blocks()
            .iter()
            .filter(|b| b.value > 0.0 && b.value < 1.0)
        {
            for i in b.start..=b.end {
                let (low_q, _) = quantile_range(&s.noise[i..=b.end], tau);
                let (_, high_q) = quantile_range(&s.noise[b.start..=i], tau);
                checked += 1;
                if s.theta_star[i] + low_q > b.value + 1e-12
                    || b.value > s.theta_star[i] + high_q + 1e-12
                {
                    violations += 1;
                }
            }
        }
    }
    vec![outcome(
        "2",
        violations == 0 && checked > 0,
        format!("sandwich on 200 datasets (n = 200): {violations} violations in {checked} interior indices"),
    )]
}

fn coverage() -> Vec<Outcome> {
    let bound = 0.95 - 2.0 * (0.05f64 * 0.95 / 1000.0).sqrt();
    [("3a", "gaussian", gaussian()), ("3b", "cauchy", cauchy())]
        .into_iter()
        .map(|(id, name, noise)| {
            let mut cfg = ExperimentConfig::new(ExperimentKind::Coverage);
            cfg.noise = noise;
            cfg.band = BandSetting::Derived { l_cap: 0.1, c_tilde: None };
            cfg.alpha = Some(0.05);
            cfg.replications = 1000;
            cfg.sizes = vec![500];
            cfg.seed = 3;
            let report = coverage_experiment(&cfg).unwrap();
            let covered = report.cell("covered", 500).unwrap().mean;
            let good = report.cell("good_fraction", 500).unwrap().mean;
            outcome(
                id,
                covered >= bound,
                format!(
                    "coverage, {name} noise, minimal valid gammas: {covered:.3} >= {bound:.3} (mean good-set fraction {good:.3})"
                ),
            )
        })
        .collect()
}

fn sized(
    kind: ExperimentKind,
    truth: MonotoneFunctionSpec,
    reps: usize,
    seed: u64,
) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::new(kind);
    cfg.truth = truth;
    cfg.replications = reps;
    cfg.sizes = vec![250, 500, 1000, 2000, 4000];
    cfg.band = BandSetting::Explicit {
        gamma1: 0.5,
        gamma2: 0.5,
    };
    cfg.seed = seed;
    cfg
}

fn fmt_means(report: &ExperimentReport, metric: &str) -> String {
    report
        .means(metric)
        .iter()
        .map(|(n, m)| format!("{n}:{m:.3}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn width() -> Vec<Outcome> {
    let inc = width_experiment(&sized(
        ExperimentKind::Width,
        MonotoneFunctionSpec::linear(0.0, 1.0),
        200,
        4,
    ))
    .unwrap();
    let step = width_experiment(&sized(
        ExperimentKind::Width,
        MonotoneFunctionSpec::floor_steps(0.1, 0.2, 5),
        200,
        4,
    ))
    .unwrap();
    let s_inc = inc.slope("width").unwrap();
    let s_step = step.slope("width").unwrap();
    let below = inc
        .means("width")
        .iter()
        .zip(step.means("width"))
        .all(|(a, b)| b.1 < a.1);
    vec![
        outcome(
            "4a",
            (-0.43..=-0.23).contains(&s_inc),
            format!(
                "width slope, increasing truth: {s_inc:.3} in [-0.43, -0.23] ({})",
                fmt_means(&inc, "width")
            ),
        ),
        outcome(
            "4b",
            (-0.62..=-0.38).contains(&s_step),
            format!(
                "width slope, 5-step truth: {s_step:.3} in [-0.62, -0.38] ({})",
                fmt_means(&step, "width")
            ),
        ),
        outcome(
            "4c",
            below,
            "5-step widths below increasing-truth widths at every n".to_string(),
        ),
    ]
}

fn pieces() -> Vec<Outcome> {
    let inc = pieces_experiment(&sized(
        ExperimentKind::Pieces,
        MonotoneFunctionSpec::linear(0.0, 1.0),
        200,
        5,
    ))
    .unwrap();
    let two =
        pieces_experiment(&sized(ExperimentKind::Pieces, steps(&[0.3, 0.7]), 200, 5)).unwrap();
    let slope = inc.slope("pieces").unwrap();
    let ratio = two
        .means("pieces")
        .iter()
        .map(|&(n, m)| m / (2.0 * (n as f64).ln()))
        .fold(0.0, f64::max);
    vec![
        outcome(
            "5a",
            (0.23..=0.43).contains(&slope),
            format!(
                "pieces slope, increasing truth: {slope:.3} in [0.23, 0.43] ({})",
                fmt_means(&inc, "pieces")
            ),
        ),
        outcome(
            "5b",
            ratio <= 3.0,
            format!("2-step truth: max mean pieces / (2 ln n) = {ratio:.3} <= 3"),
        ),
    ]
}

/// Explicit policy gammas: `gamma1` equal to the noise scale, `gamma2` as in the figures.
const POLICY_GAMMAS: (f64, f64) = (0.1, 0.5);

fn bandit_config(arms: [MonotoneFunctionSpec; 2]) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::new(ExperimentKind::Bandit);
    cfg.arms = Some(arms);
    cfg.sizes = vec![1000, 4000, 16000];
    cfg.replications = 50;
    cfg.seed = 6;
    cfg.band = BandSetting::Explicit {
        gamma1: POLICY_GAMMAS.0,
        gamma2: POLICY_GAMMAS.1,
    };
    cfg
}

fn regret() -> Vec<Outcome> {
    let smooth = regret_experiment(&bandit_config([
        MonotoneFunctionSpec::linear(0.1, 0.6),
        MonotoneFunctionSpec::linear(0.2, 0.6),
    ]))
    .unwrap();
    let step = regret_experiment(&bandit_config([steps(&[0.2, 0.5]), steps(&[0.5, 0.8])])).unwrap();
    let s_smooth = smooth.slope("regret").unwrap();
    let s_step = step.slope("regret").unwrap();
    let r_smooth = smooth.cell("regret", 16000).unwrap().mean;
    let r_step = step.cell("regret", 16000).unwrap().mean;
    let monotone = smooth
        .rows_for("unc_monotone")
        .chain(step.rows_for("unc_monotone"))
        .all(|r| r.value == 1.0);
    vec![
        outcome(
            "6a",
            (0.5..=0.85).contains(&s_smooth),
            format!(
                "regret slope, linear arms: {s_smooth:.3} in [0.5, 0.85] ({})",
                fmt_means(&smooth, "regret")
            ),
        ),
        outcome(
            "6b",
            (0.35..=0.7).contains(&s_step),
            format!(
                "regret slope, 2-step arms gap 0.3: {s_step:.3} in [0.35, 0.7] ({})",
                fmt_means(&step, "regret")
            ),
        ),
        outcome(
            "6c",
            r_step < r_smooth,
            format!("regret at T = 16000: step arms {r_step:.1} < linear arms {r_smooth:.1}"),
        ),
        outcome(
            "6d",
            monotone,
            "uncertain-region measure non-increasing in every replication".to_string(),
        ),
    ]
}

fn policy_degenerate() -> Vec<Outcome> {
    let growth = NoiseGrowthParams::new(1.0, 1.0).unwrap();
    let mut config = PolicyConfig::new(4000, growth, 7);
    config.gamma_override = Some(POLICY_GAMMAS);
    let same = Environment {
        f0: MonotoneFunctionSpec::linear(0.1, 0.5),
        f1: MonotoneFunctionSpec::linear(0.1, 0.5),
        noise: gaussian(),
    };
    let zero = run_policy(&same, &config).unwrap().total_regret();

    let separated = Environment {
        f0: MonotoneFunctionSpec::constant(0.2),
        f1: MonotoneFunctionSpec::constant(0.7),
        noise: ErrorDistSpec::Degenerate,
    };
    let trace = run_policy(&separated, &config).unwrap();
    let ends = trace.regret_at_epoch_ends();
    let first = trace.epochs.iter().position(|e| e.fired);
    let (flat, detail) = match first {
        Some(k) => {
            let after = trace.total_regret() - ends[k];
            let bound =
                0.5 * (trace.epochs[0].size + trace.epochs.get(1).map_or(0, |e| e.size)) as f64;
            (
                after == 0.0,
                format!(
                    "noiseless constants: regret {:.1} at first fired update (epoch {}), {after:.1} added afterwards; total {:.1} vs (N1 + N2) / 2 = {bound:.1}",
                    ends[k],
                    k + 1,
                    trace.total_regret()
                ),
            )
        }
        None => (false, "noiseless constants: no update fired".to_string()),
    };
    vec![
        outcome(
            "7a",
            zero == 0.0,
            format!("identical arms: cumulative regret {zero}"),
        ),
        outcome("7b", flat, detail),
    ]
}

fn figures() -> Vec<Outcome> {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = ExperimentConfig::new(ExperimentKind::Figures);
    cfg.replications = 200;
    cfg.seed = 8;
    let (report, tables) = figures_reproduction(&cfg).unwrap();
    let expected = "index,x,y,y_display,truth,fit,lower,upper,lse";
    let mut schema_ok = tables.len() == 6;
    for table in &tables {
        let path = dir.path().join(format!("{}.csv", table.name));
        table
            .write_csv(std::fs::File::create(&path).unwrap())
            .unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        schema_ok &= text.lines().next() == Some(expected) && text.lines().count() == 501;
    }
    let mean = |metric: &str| report.cell(metric, 500).unwrap().mean;
    let c1 = mean("figure1_gaussian_linear.covered");
    let c2 = mean("figure2_gaussian_steps.covered");
    let beats = mean("figure4_lse_vs_median.median_beats_lse");
    vec![
        outcome(
            "8a",
            schema_ok,
            "six figure tables written with the documented columns".to_string(),
        ),
        outcome(
            "8b",
            c1 >= 0.9 && c2 >= 0.9,
            format!("figure 1 / 2 band coverage over 200 replications: {c1:.3} / {c2:.3} >= 0.9"),
        ),
        outcome(
            "8c",
            beats >= 0.95,
            format!(
                "median fit closer to truth than least squares (max deviation): {beats:.3} >= 0.95"
            ),
        ),
    ]
}

fn random_union(rng: &mut ChaCha8Rng) -> IntervalUnion {
    let k = rng.random_range(0..6);
    IntervalUnion::from_parts(
        (0..k)
            .map(|_| {
                let a: f64 = rng.random();
                (a, a + rng.random_range(0.0..0.4))
            })
            .collect(),
    )
}

fn random_band(rng: &mut ChaCha8Rng) -> BandFunction {
    let k = rng.random_range(1..10);
    let mut xs: Vec<f64> = (0..k).map(|_| rng.random()).collect();
    let mut lower: Vec<f64> = (0..k).map(|_| rng.random_range(0.0..0.6)).collect();
    xs.sort_by(f64::total_cmp);
    lower.sort_by(f64::total_cmp);
    let mut upper: Vec<f64> = lower
        .iter()
        .map(|l| l + rng.random_range(0.0..0.4))
        .collect();
    for i in 1..k {
        upper[i] = upper[i].max(upper[i - 1]);
    }
    BandFunction::from_parts(xs, lower, upper).unwrap()
}

fn interval_algebra() -> Vec<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut failures = 0;
    for _ in 0..10_000 {
        let a = random_union(&mut rng);
        let b = random_union(&mut rng);
        let additive =
            a.union(&b).measure() + a.intersect(&b).measure() - a.measure() - b.measure();
        let complement = a.measure() + a.complement().measure() - 1.0;
        let split =
            regions_from_band_comparison(&random_band(&mut rng), &random_band(&mut rng), &a);
        let partition =
            split.cert0.measure() + split.cert1.measure() + split.unc.measure() - a.measure();
        let disjoint = split.cert0.intersect(&split.cert1).is_empty()
            && split.cert0.intersect(&split.unc).is_empty()
            && split.cert1.intersect(&split.unc).is_empty();
        if additive.abs() > 1e-12
            || complement.abs() > 1e-12
            || partition.abs() > 1e-12
            || !disjoint
        {
            failures += 1;
        }
    }
    vec![outcome(
        "9",
        failures == 0,
        format!("10000 randomized set identities: {failures} failures"),
    )]
}

fn main() {
    type Criterion = (fn() -> Vec<Outcome>, Duration);
    let criteria: [Criterion; 9] = [
        (oracle_equivalence, Duration::from_secs(10)),
        (sandwich, Duration::from_secs(10)),
        (coverage, Duration::from_secs(120)),
        (width, Duration::from_secs(300)),
        (pieces, Duration::from_secs(180)),
        (regret, Duration::from_secs(600)),
        (policy_degenerate, Duration::from_secs(5)),
        (figures, Duration::from_secs(120)),
        (interval_algebra, Duration::from_secs(5)),
    ];
    let mut failed = 0;
    for (run, limit) in criteria {
        let start = Instant::now();
        let outcomes = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= limit;
        for o in outcomes {
            let pass = o.pass && in_time;
            failed += usize::from(!pass);
            println!(
                "[{}] {:<3} {} ({:.1}s, limit {}s)",
                if pass { "PASS" } else { "FAIL" },
                o.id,
                o.detail,
                elapsed.as_secs_f64(),
                limit.as_secs()
            );
        }
    }
    if failed > 0 {
        println!("{failed} acceptance checks failed");
        std::process::exit(1);
    }
    println!("all acceptance checks passed");
}
