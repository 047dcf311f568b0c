//! Epoch-based successive elimination for two-armed monotone contextual bandits.
//!
//! Epoch sizes start at `ceil(sqrt(T))` and double. Contexts that fall in a
//! certified region pull that region's arm; everything else pulls a fair coin
//! and is buffered. At the end of an epoch each arm's buffer is fitted on its
//! own with a `1 - alpha_T` median band (`alpha_T = T^-2`), and the parts of
//! the uncertain region where one arm's lower band clears the other's upper
//! band move permanently into that arm's certified set.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::band::{band_params, BandParams, NoiseGrowthParams};
use crate::band_fun::{fit_band_function, BandFunction, DesignData};
use crate::envs::Environment;
use crate::error::{Error, Result};
use crate::intervals::{regions_from_band_comparison, IntervalUnion};
use crate::quantile::QuantileLevel;

/// Bands are fitted at the median: with symmetric noise it equals the mean reward.
pub const POLICY_TAU: QuantileLevel = QuantileLevel::MEDIAN;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolicyConfig {
    pub horizon: usize,
    /// Replaces `alpha_T = T^-2` when set.
    pub alpha_override: Option<f64>,
    pub growth: NoiseGrowthParams,
    /// Explicit `(gamma1, gamma2)`; bypasses the minimal valid choice.
    pub gamma_override: Option<(f64, f64)>,
    pub min_fit_points: usize,
    pub seed: u64,
    /// ChaCha stream index, so replications can share one seed.
    #[serde(default)]
    pub stream: u64,
}

impl PolicyConfig {
    pub fn new(horizon: usize, growth: NoiseGrowthParams, seed: u64) -> Self {
        Self {
            horizon,
            alpha_override: None,
            growth,
            gamma_override: None,
            min_fit_points: 3,
            seed,
            stream: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.horizon == 0 {
            return Err(Error::InvalidParameter("horizon must be at least 1".into()));
        }
        if self.min_fit_points < 3 {
            return Err(Error::InvalidParameter(format!(
                "min_fit_points must be at least 3, got {}",
                self.min_fit_points
            )));
        }
        if let Some(alpha) = self.alpha_override {
            if !(alpha > 0.0 && alpha < 1.0) {
                return Err(Error::InvalidAlpha(alpha));
            }
        }
        if let Some((g1, g2)) = self.gamma_override {
            BandParams::explicit(g1, g2, 0.5)?;
        }
        NoiseGrowthParams::new(self.growth.c_tilde, self.growth.l_cap)?;
        Ok(())
    }

    pub fn alpha(&self) -> f64 {
        self.alpha_override
            .unwrap_or_else(|| 1.0 / (self.horizon as f64 * self.horizon as f64))
    }

    /// Band parameters used for every per-arm fit.
    pub fn band_params(&self) -> Result<BandParams> {
        match self.gamma_override {
            Some((g1, g2)) => BandParams::explicit(g1, g2, self.alpha()),
            None => band_params(self.alpha(), &self.growth),
        }
    }
}

/// `N_1 = ceil(sqrt(T))`, doubling, with the last epoch truncated so the
/// sizes sum to `T`.
pub fn epoch_schedule(horizon: usize) -> Vec<usize> {
    let mut first = horizon.isqrt();
    if first * first < horizon {
        first += 1;
    }
    let mut sizes = Vec::new();
    let mut remaining = horizon;
    let mut size = first.max(1);
    while remaining > 0 {
        let n = size.min(remaining);
        sizes.push(n);
        remaining -= n;
        size *= 2;
    }
    sizes
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolicyState {
    /// 0-based index of the running epoch.
    pub epoch: usize,
    pub cert0: IntervalUnion,
    pub cert1: IntervalUnion,
    pub unc: IntervalUnion,
    /// Bands from the most recent update that fired.
    pub bands: [Option<BandFunction>; 2],
    /// This epoch's `(x, reward)` pairs with `x` in the uncertain region, per arm.
    pub buffers: [Vec<(f64, f64)>; 2],
}

impl Default for PolicyState {
    fn default() -> Self {
        Self::new()
    }
}

impl PolicyState {
    pub fn new() -> Self {
        Self {
            epoch: 0,
            cert0: IntervalUnion::empty(),
            cert1: IntervalUnion::empty(),
            unc: IntervalUnion::full(),
            bands: [None, None],
            buffers: [Vec::new(), Vec::new()],
        }
    }

    pub fn cert(&self, arm: usize) -> &IntervalUnion {
        if arm == 0 {
            &self.cert0
        } else {
            &self.cert1
        }
    }

    /// Buffers the observation if its context is still uncertain.
    pub fn record(&mut self, x: f64, arm: usize, reward: f64) {
        if self.unc.contains(x) {
            self.buffers[arm].push((x, reward));
        }
    }
}

/// Certified arm for `x`, otherwise a fair coin.
pub fn select_arm<R: Rng + ?Sized>(state: &PolicyState, x: f64, rng: &mut R) -> usize {
    if state.cert0.contains(x) {
        0
    } else if state.cert1.contains(x) {
        1
    } else {
        usize::from(rng.random_bool(0.5))
    }
}

/// What happened at the end of one epoch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpochRecord {
    pub epoch: usize,
    pub size: usize,
    /// Buffered samples per arm.
    pub samples: [usize; 2],
    /// `false` when a buffer was too small to fit and the sets were left as is.
    pub fired: bool,
    /// Measure of the uncertain region after the update.
    pub unc_measure: f64,
    /// Constant pieces of each arm's fit, when fitted.
    pub pieces: [Option<usize>; 2],
}

/// Closes the running epoch: refits both arms on their buffers, moves newly
/// certified parts of the uncertain region into the cumulative certified sets,
/// clears the buffers and advances the epoch counter.
pub fn epoch_update(state: &mut PolicyState, config: &PolicyConfig) -> Result<EpochRecord> {
    let samples = [state.buffers[0].len(), state.buffers[1].len()];
    let mut record = EpochRecord {
        epoch: state.epoch,
        size: 0,
        samples,
        fired: false,
        unc_measure: state.unc.measure(),
        pieces: [None, None],
    };
    let buffers = std::mem::take(&mut state.buffers);
    state.epoch += 1;
    if samples.iter().any(|&s| s < config.min_fit_points) {
        return Ok(record);
    }

    let params = config.band_params()?;
    let mut fitted = Vec::with_capacity(2);
    for buffer in buffers {
        let data = DesignData { points: buffer };
        fitted.push(fit_band_function(&data, POLICY_TAU, &params)?);
    }
    let split = regions_from_band_comparison(&fitted[0].band, &fitted[1].band, &state.unc);
    state.cert0 = state.cert0.union(&split.cert0);
    state.cert1 = state.cert1.union(&split.cert1);
    state.unc = split.unc;
    debug_assert!(state.cert0.intersect(&state.cert1).is_empty());
    debug_assert!(
        (state.cert0.measure() + state.cert1.measure() + state.unc.measure() - 1.0).abs() < 1e-9
    );

    record.fired = true;
    record.unc_measure = state.unc.measure();
    record.pieces = [
        Some(fitted[0].fit.count_pieces()),
        Some(fitted[1].fit.count_pieces()),
    ];
    let mut fitted = fitted.into_iter().map(|f| f.band);
    state.bands = [fitted.next(), fitted.next()];
    Ok(record)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub round: usize,
    pub x: f64,
    pub arm: usize,
    pub reward: f64,
    /// `max(F_0(x), F_1(x)) - F_arm(x)`.
    pub regret: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegretTrace {
    pub rounds: Vec<RoundRecord>,
    /// Prefix sums of the per-round pseudo-regret.
    pub cumulative: Vec<f64>,
    pub epochs: Vec<EpochRecord>,
}

impl RegretTrace {
    pub fn total_regret(&self) -> f64 {
        self.cumulative.last().copied().unwrap_or(0.0)
    }

    /// Cumulative regret at the end of each epoch.
    pub fn regret_at_epoch_ends(&self) -> Vec<f64> {
        let mut end = 0;
        self.epochs
            .iter()
            .map(|e| {
                end += e.size;
                self.cumulative[end - 1]
            })
            .collect()
    }
}

/// Simulates `config.horizon` rounds with `X ~ Unif[0, 1)`.
pub fn run_policy(env: &Environment, config: &PolicyConfig) -> Result<RegretTrace> {
    env.validate()?;
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(config.stream);
    let mut state = PolicyState::new();
    let mut rounds = Vec::with_capacity(config.horizon);
    let mut cumulative = Vec::with_capacity(config.horizon);
    let mut epochs = Vec::new();
    let mut total = 0.0;

    for size in epoch_schedule(config.horizon) {
        for _ in 0..size {
            let x: f64 = rng.random();
            let arm = select_arm(&state, x, &mut rng);
            let means = [env.f0.eval_unchecked(x), env.f1.eval_unchecked(x)];
            let reward = means[arm] + env.noise.sample(&mut rng);
            let regret = means[0].max(means[1]) - means[arm];
            total += regret;
            rounds.push(RoundRecord {
                round: rounds.len(),
                x,
                arm,
                reward,
                regret,
            });
            cumulative.push(total);
            state.record(x, arm, reward);
        }
        let mut record = epoch_update(&mut state, config)?;
        record.size = size;
        epochs.push(record);
    }

    Ok(RegretTrace {
        rounds,
        cumulative,
        epochs,
    })
}
