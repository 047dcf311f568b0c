//! Confidence bands for isotonic quantile regression and a band-driven
//! successive-elimination policy for two-armed monotone contextual bandits.

// `!(x > 0.0)` style checks are kept because they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod band;
pub mod band_fun;
pub mod envs;
pub mod error;
pub mod harness;
pub mod intervals;
pub mod oracle;
mod pava;
pub mod policy;
pub mod quantile;

pub use band::{
    band_params, band_sequence, check_coverage, good_set, BandParams, NoiseGrowthParams,
    SequenceBand,
};
pub use band_fun::{build_band_function, fit_band_function, BandFunction, DesignData, FittedBand};
pub use envs::{
    assumption_a_params, eval_truth, generate_regression_sample, generate_sequence_sample,
    sample_noise, Environment, ErrorDistSpec, MonotoneFunctionSpec,
};
pub use error::{Error, Result};
pub use intervals::{regions_from_band_comparison, IntervalUnion, RegionSplit};
pub use oracle::{dp_oracle_fit, OracleFit};
pub use policy::{
    epoch_schedule, epoch_update, run_policy, select_arm, PolicyConfig, PolicyState, RegretTrace,
};
pub use quantile::{
    fit_isotonic_mean, fit_isotonic_median_unit, fit_isotonic_quantile, objective, pinball_loss,
    tau_quantile, Block, IsotonicFit, QuantileLevel,
};
