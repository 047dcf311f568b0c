//! Monte-Carlo coverage, width, piece-count and regret experiments through
//! the harness API, with their log-log slopes.

use isoband::harness::{
    coverage_experiment, pieces_experiment, regret_experiment, width_experiment, BandSetting,
    ExperimentConfig, ExperimentKind, HarnessError,
};
use isoband::MonotoneFunctionSpec;

fn main() -> Result<(), HarnessError> {
    let mut coverage = ExperimentConfig::new(ExperimentKind::Coverage);
    coverage.band = BandSetting::Derived {
        l_cap: 0.1,
        c_tilde: None,
    };
    coverage.alpha = Some(0.05);
    coverage.replications = 200;
    let report = coverage_experiment(&coverage)?;
    let cell = report.cell("covered", 500).expect("coverage cell");
    println!(
        "coverage at n = 500: {:.3} +- {:.3}",
        cell.mean, cell.std_error
    );

    for (name, truth) in [
        ("increasing", MonotoneFunctionSpec::linear(0.0, 1.0)),
        ("5 steps", MonotoneFunctionSpec::floor_steps(0.1, 0.2, 5)),
    ] {
        let mut width = ExperimentConfig::new(ExperimentKind::Width);
        width.truth = truth.clone();
        width.replications = 50;
        let report = width_experiment(&width)?;
        println!(
            "{name:>10}: width slope {:.3}",
            report.slope("width").unwrap_or(f64::NAN)
        );

        let mut pieces = ExperimentConfig::new(ExperimentKind::Pieces);
        pieces.truth = truth;
        pieces.replications = 50;
        let report = pieces_experiment(&pieces)?;
        println!(
            "{name:>10}: pieces slope {:.3}",
            report.slope("pieces").unwrap_or(f64::NAN)
        );
    }

    let mut bandit = ExperimentConfig::new(ExperimentKind::Bandit);
    bandit.arms = Some([
        MonotoneFunctionSpec::linear(0.1, 0.6),
        MonotoneFunctionSpec::linear(0.2, 0.6),
    ]);
    bandit.band = BandSetting::Explicit {
        gamma1: 0.1,
        gamma2: 0.5,
    };
    bandit.replications = 20;
    let report = regret_experiment(&bandit)?;
    for (t, regret) in report.means("regret") {
        println!("T = {t:>5}: mean regret {regret:.1}");
    }
    println!(
        "regret slope {:.3}",
        report.slope("regret").unwrap_or(f64::NAN)
    );
    Ok(())
}
