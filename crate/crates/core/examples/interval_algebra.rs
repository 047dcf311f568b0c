//! Set algebra on unions of half-open intervals and the region split produced
//! by comparing two band functions.

use isoband::{regions_from_band_comparison, BandFunction, IntervalUnion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> isoband::Result<()> {
    let a = IntervalUnion::from_parts(vec![(0.1, 0.4), (0.35, 0.5), (0.8, 0.9)]);
    let b = IntervalUnion::interval(0.3, 0.85);
    println!("a = {:?} (measure {:.2})", a.parts(), a.measure());
    println!("b = {:?}", b.parts());
    println!("a & b = {:?}", a.intersect(&b).parts());
    println!("a | b = {:?}", a.union(&b).parts());
    println!("a - b = {:?}", a.difference(&b).parts());
    println!("not a = {:?}", a.complement().parts());

    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let draws: Vec<f64> = (0..5)
        .map(|_| a.sample_uniform(&mut rng))
        .collect::<Result<_, _>>()?;
    println!("uniform draws from a: {draws:.3?}");

    // Arm 0 is ahead below 0.49, arm 1 from 0.5 on. `U` looks right and `L`
    // looks left, so the cell between the two design points stays open.
    let xs = vec![0.0, 0.49, 0.5, 1.0];
    let f0 = BandFunction::from_parts(
        xs.clone(),
        vec![0.30, 0.30, 0.30, 0.35],
        vec![0.40, 0.40, 0.40, 0.45],
    )?;
    let f1 = BandFunction::from_parts(
        xs,
        vec![0.10, 0.10, 0.50, 0.50],
        vec![0.20, 0.20, 0.60, 0.60],
    )?;
    let split = regions_from_band_comparison(&f0, &f1, &IntervalUnion::full());
    println!("cert0 = {:?}", split.cert0.parts());
    println!("cert1 = {:?}", split.cert1.parts());
    println!("unc   = {:?}", split.unc.parts());
    Ok(())
}
