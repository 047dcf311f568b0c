//! Isotonic quantile fits at several levels, checked against the exact
//! dynamic-programming solver on a short sequence.

use isoband::{
    dp_oracle_fit, fit_isotonic_mean, fit_isotonic_quantile, generate_sequence_sample, objective,
    ErrorDistSpec, MonotoneFunctionSpec, QuantileLevel,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> isoband::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let truth = MonotoneFunctionSpec::linear(0.1, 0.8);
    let sample =
        generate_sequence_sample(&truth, &ErrorDistSpec::Cauchy { scale: 0.1 }, 12, &mut rng)?;

    println!("y = {:.3?}", sample.y);
    for tau in [0.3, 0.5, 0.7] {
        let tau = QuantileLevel::new(tau)?;
        let fit = fit_isotonic_quantile(&sample.y, tau, 0.0, 1.0)?;
        let oracle = dp_oracle_fit(&sample.y, tau, 0.0, 1.0)?;
        println!(
            "tau {:.1}: {} pieces, objective {:.6} (exact {:.6})",
            tau.value(),
            fit.count_pieces(),
            objective(&sample.y, fit.theta_hat(), tau)?,
            oracle.objective
        );
        println!("  fit = {:.3?}", fit.theta_hat());
    }

    let lse = fit_isotonic_mean(&sample.y)?;
    println!("least squares = {:.3?}", lse.theta_hat());
    Ok(())
}
