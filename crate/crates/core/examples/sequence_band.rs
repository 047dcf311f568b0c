//! Confidence band for a fixed-design sequence: minimal valid parameters
//! versus the explicit values used in the figures.

use isoband::{
    assumption_a_params, band_params, band_sequence, check_coverage, fit_isotonic_median_unit,
    generate_sequence_sample, BandParams, ErrorDistSpec, MonotoneFunctionSpec,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> isoband::Result<()> {
    let noise = ErrorDistSpec::Gaussian { sigma: 0.1 };
    let truth = MonotoneFunctionSpec::floor_steps(0.1, 0.2, 5);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let sample = generate_sequence_sample(&truth, &noise, 2000, &mut rng)?;
    let fit = fit_isotonic_median_unit(&sample.y)?;
    println!("n = 2000, {} constant pieces", fit.count_pieces());

    let growth = assumption_a_params(&noise, 0.1)?;
    let valid = band_params(0.05, &growth)?;
    let figure = BandParams::explicit(0.5, 0.5, 0.05)?;
    for (name, params) in [("minimal valid", valid), ("explicit 0.5/0.5", figure)] {
        let band = band_sequence(&fit, &params)?;
        println!(
            "{name:>16}: gamma1 {:.3}, gamma2 {:.3}, good set {:>4}, mean width {:.3}, covers truth: {}",
            params.gamma1,
            params.gamma2,
            band.good_set.len(),
            band.mean_width(),
            check_coverage(&band, &sample.theta_star)?
        );
    }
    Ok(())
}
