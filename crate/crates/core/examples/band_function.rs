//! Band function on `[0, 1]` from random-design data, evaluated off the
//! design points and averaged over a region.

use isoband::{
    fit_band_function, generate_regression_sample, BandParams, ErrorDistSpec, IntervalUnion,
    MonotoneFunctionSpec, QuantileLevel,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> isoband::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let truth = MonotoneFunctionSpec::linear(0.0, 1.0);
    let noise = ErrorDistSpec::Cauchy { scale: 0.1 };
    let sample =
        generate_regression_sample(&truth, &noise, &IntervalUnion::full(), 1000, &mut rng)?;
    let params = BandParams::explicit(0.5, 0.5, 0.05)?;
    let fitted = fit_band_function(&sample.data, QuantileLevel::MEDIAN, &params)?;

    for x in [0.0, 0.1, 0.25, 0.5, 0.75, 0.9, 1.0] {
        let (lower, upper) = fitted.band.eval(x)?;
        println!(
            "x = {x:.2}: [{lower:.3}, {upper:.3}], truth {:.3}",
            truth.eval(x)?
        );
    }
    for region in [IntervalUnion::full(), IntervalUnion::interval(0.25, 0.75)] {
        println!(
            "average width on {:?}: {:.3}",
            region.parts(),
            fitted.band.average_width(&region)?
        );
    }
    Ok(())
}
