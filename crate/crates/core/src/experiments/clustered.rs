use serde::{Deserialize, Serialize};

use super::plan::ordered_map;
use super::stats::{Estimate, Moments};
use crate::error::{Error, Result};
use crate::process::{run_configuration, Color, Configuration, InitSpec, SimParams, StepEvent, StepObserver};
use crate::rng::TrialKey;

/// Counts red moves and blue arrivals at the vertex that held the red
/// cluster at the start.
#[derive(Clone, Debug, Default)]
pub struct ClusterEventCounter {
    cluster: usize,
    pub red_moves: u64,
    pub blue_arrivals: u64,
}

impl ClusterEventCounter {
    pub fn events(&self) -> u64 {
        self.red_moves + self.blue_arrivals
    }
}

impl StepObserver for ClusterEventCounter {
    fn on_start(&mut self, cfg: &Configuration) {
        self.cluster = cfg.position(Color::Red, 0);
    }

    fn on_step(&mut self, _cfg: &Configuration, ev: &StepEvent) {
        match ev.mover {
            Color::Red => self.red_moves += 1,
            Color::Blue if ev.target == self.cluster => self.blue_arrivals += 1,
            Color::Blue => {}
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlowClusteredConfig {
    pub n: usize,
    /// `None` means `1 / (4 ln n)`.
    pub p: Option<f64>,
    pub trials: u32,
    pub seed: u64,
}

impl SlowClusteredConfig {
    pub fn p(&self) -> f64 {
        self.p.unwrap_or_else(|| 1.0 / (4.0 * (self.n as f64).ln()))
    }

    /// `floor(3 n ln n)`.
    pub fn horizon(&self) -> u64 {
        (3.0 * self.n as f64 * (self.n as f64).ln()).floor() as u64
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlowClusteredReport {
    pub n: usize,
    pub p: f64,
    pub horizon: u64,
    pub trials: u64,
    /// Trials still alive after `horizon` steps, i.e. with `T > 3 n ln n`.
    pub survived_horizon: u64,
    pub survival_fraction: f64,
    pub events: Estimate,
    pub min_events: u64,
    pub max_events: u64,
    /// `p * horizon`, the expected number of red moves.
    pub predicted_red_moves: f64,
    /// `5 sqrt(n ln n)`.
    pub event_tolerance: f64,
    /// Trials whose event count lies within the tolerance of the prediction.
    pub events_within_tolerance: u64,
    pub mean_survivors: f64,
}

impl SlowClusteredReport {
    pub fn all_events_within_tolerance(&self) -> bool {
        self.events_within_tolerance == self.trials
    }
}

/// Runs the clustered-red start for `3 n ln n` steps per trial and reports
/// how often particles remain and how many red moves or blue arrivals at
/// the cluster vertex occurred.
pub fn slow_clustered_scenario(config: &SlowClusteredConfig, workers: Option<usize>) -> Result<SlowClusteredReport> {
    let n = config.n;
    if n < 2 {
        return Err(Error::InvalidParams("the horizon needs n >= 2".into()));
    }
    if config.trials == 0 {
        return Err(Error::InvalidParams("need at least one trial".into()));
    }
    let p = config.p();
    let params = SimParams::new(n, p)?.with_init(InitSpec::ClusteredRed);
    let horizon = config.horizon();
    let results = ordered_map((0..config.trials).collect(), workers, |trial| {
        let mut rng = TrialKey::new(config.seed, 0, trial).rng();
        let mut cfg = Configuration::new(&params, &mut rng)?;
        let mut counter = ClusterEventCounter::default();
        let stats = run_configuration(&mut cfg, p, horizon, &mut rng, &mut [&mut counter]);
        Ok::<_, Error>((stats.truncated, counter.events(), cfg.m()))
    });

    let ln = (n as f64).ln();
    let predicted = p * horizon as f64;
    let tolerance = 5.0 * (n as f64 * ln).sqrt();
    let mut events = Moments::default();
    let mut survivors = Moments::default();
    let (mut survived, mut within, mut lo, mut hi) = (0, 0, u64::MAX, 0);
    for r in results {
        let (alive, count, m) = r?;
        survived += alive as u64;
        within += ((count as f64 - predicted).abs() <= tolerance) as u64;
        lo = lo.min(count);
        hi = hi.max(count);
        events.push(count as f64);
        survivors.push(m as f64);
    }
    let trials = config.trials as u64;
    Ok(SlowClusteredReport {
        n,
        p,
        horizon,
        trials,
        survived_horizon: survived,
        survival_fraction: survived as f64 / trials as f64,
        events: events.estimate(),
        min_events: lo,
        max_events: hi,
        predicted_red_moves: predicted,
        event_tolerance: tolerance,
        events_within_tolerance: within,
        mean_survivors: survivors.mean(),
    })
}
