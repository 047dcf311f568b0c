//! One run of the elimination policy, epoch by epoch.

use isoband::{
    assumption_a_params, run_policy, Environment, ErrorDistSpec, MonotoneFunctionSpec, PolicyConfig,
};

fn main() -> isoband::Result<()> {
    let env = Environment {
        f0: MonotoneFunctionSpec::floor_steps(0.2, 0.6, 2),
        f1: MonotoneFunctionSpec::constant(0.5),
        noise: ErrorDistSpec::Gaussian { sigma: 0.1 },
    };
    let growth = assumption_a_params(&env.noise, 0.1)?;

    let mut config = PolicyConfig::new(16_000, growth, 7);
    let valid = config.band_params()?;
    println!(
        "minimal valid gammas for alpha = T^-2: {:.3} / {:.3}",
        valid.gamma1, valid.gamma2
    );
    config.gamma_override = Some((0.1, 0.5));

    let trace = run_policy(&env, &config)?;
    let ends = trace.regret_at_epoch_ends();
    println!("epoch   size  fired  unc measure  regret");
    for (e, regret) in trace.epochs.iter().zip(ends) {
        println!(
            "{:>5} {:>6} {:>6} {:>12.4} {:>7.1}",
            e.epoch + 1,
            e.size,
            e.fired,
            e.unc_measure,
            regret
        );
    }
    println!(
        "total pseudo-regret over {} rounds: {:.1}",
        trace.rounds.len(),
        trace.total_regret()
    );
    Ok(())
}
