use isoband::{dp_oracle_fit, fit_isotonic_mean, fit_isotonic_quantile, objective, QuantileLevel};
use proptest::prelude::*;

fn taus() -> impl Strategy<Value = f64> {
    prop_oneof![Just(0.3), Just(0.5), Just(0.7), 0.05f64..0.95]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn pava_matches_dp_on_continuous_data(
        y in prop::collection::vec(-0.5f64..1.5, 1..=12),
        tau in taus(),
    ) {
        let tau = QuantileLevel::new(tau).unwrap();
        let fit = fit_isotonic_quantile(&y, tau, 0.0, 1.0).unwrap();
        let oracle = dp_oracle_fit(&y, tau, 0.0, 1.0).unwrap();
        let pava = objective(&y, fit.theta_hat(), tau).unwrap();
        prop_assert!((pava - oracle.objective).abs() <= 1e-9, "pava {pava} oracle {}", oracle.objective);
    }

    #[test]
    fn pava_matches_dp_with_ties(
        y in prop::collection::vec((0u8..5).prop_map(|v| f64::from(v) / 4.0), 1..=12),
        tau in taus(),
    ) {
        let tau = QuantileLevel::new(tau).unwrap();
        let fit = fit_isotonic_quantile(&y, tau, 0.0, 1.0).unwrap();
        let oracle = dp_oracle_fit(&y, tau, 0.0, 1.0).unwrap();
        let pava = objective(&y, fit.theta_hat(), tau).unwrap();
        prop_assert!((pava - oracle.objective).abs() <= 1e-9);
    }

    #[test]
    fn fit_is_feasible(
        y in prop::collection::vec(-3.0f64..3.0, 1..=60),
        tau in taus(),
    ) {
        let fit = fit_isotonic_quantile(&y, QuantileLevel::new(tau).unwrap(), 0.0, 1.0).unwrap();
        let theta = fit.theta_hat();
        prop_assert!(theta.windows(2).all(|w| w[0] <= w[1]));
        prop_assert!(theta.iter().all(|t| (0.0..=1.0).contains(t)));
        let covered: usize = fit.blocks().iter().map(|b| b.len()).sum();
        prop_assert_eq!(covered, y.len());
        prop_assert_eq!(fit.count_pieces(), fit.blocks().len());
    }

    #[test]
    fn mean_fit_blocks_hold_their_averages(y in prop::collection::vec(-3.0f64..3.0, 1..=60)) {
        let fit = fit_isotonic_mean(&y).unwrap();
        prop_assert!(fit.theta_hat().windows(2).all(|w| w[0] <= w[1]));
        // Each pooled run of the raw PAVA output averages its data.
        let theta = fit.theta_hat();
        let mut start = 0;
        while start < y.len() {
            let mut end = start;
            while end + 1 < y.len() && theta[end + 1] == theta[start] {
                end += 1;
            }
            let mean = y[start..=end].iter().sum::<f64>() / (end - start + 1) as f64;
            prop_assert!((mean - theta[start]).abs() < 1e-9);
            start = end + 1;
        }
    }
}

#[test]
fn already_monotone_data_is_its_own_fit() {
    let y: Vec<f64> = (0..50).map(|i| i as f64 / 50.0).collect();
    let fit = fit_isotonic_quantile(&y, QuantileLevel::MEDIAN, 0.0, 1.0).unwrap();
    assert_eq!(fit.theta_hat(), y.as_slice());
    assert_eq!(fit.count_pieces(), 50);
}
