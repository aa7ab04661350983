use serde::{Deserialize, Serialize};

use super::plan::{run_plan, ExperimentPlan};
use super::stats::{two_sample_z, Estimate};
use crate::error::{Error, Result};
use crate::instrumentation::WFunction;
use crate::process::SimParams;

/// Standard errors used for the confidence intervals in the table.
pub const CI_Z: f64 = 1.96;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub n: usize,
    pub p: f64,
    pub trials: u64,
    pub mean_t: f64,
    pub stderr_t: f64,
    pub ratio: f64,
    pub ratio_stderr: f64,
    pub ratio_ci: (f64, f64),
    /// `(mean T - 2 n ln n) / (n (ln n)^{2/3})`.
    pub residual: f64,
    pub failures: u64,
    pub max_t: u64,
}

impl SweepRow {
    pub fn ratio_estimate(&self) -> Estimate {
        Estimate { mean: self.ratio, stderr: self.ratio_stderr, count: self.trials }
    }
}

/// A rise in the ratio between consecutive `n` that the intervals cannot
/// explain.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonotoneBreak {
    pub p: f64,
    pub n_before: usize,
    pub n_after: usize,
}

/// Ratio difference between two speeds at the same `n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpeedComparison {
    pub n: usize,
    pub p_a: f64,
    pub p_b: f64,
    pub z: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
    pub non_monotone: Vec<MonotoneBreak>,
    pub speed: Vec<SpeedComparison>,
}

impl SweepTable {
    pub fn row(&self, n: usize, p: f64) -> Option<&SweepRow> {
        self.rows.iter().find(|r| r.n == n && r.p == p)
    }

    pub fn ratios_within(&self, lo: f64, hi: f64) -> bool {
        self.rows.iter().all(|r| (lo..=hi).contains(&r.ratio))
    }

    pub fn max_speed_z(&self) -> f64 {
        self.speed.iter().map(|s| s.z.abs()).fold(0.0, f64::max)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub n_list: Vec<usize>,
    pub p_list: Vec<f64>,
    pub trials: u32,
    pub seed: u64,
    pub w: WFunction,
}

/// Ratio of mean extinction time to `2 n ln n` over a grid of `n` and `p`,
/// all from the default start.
pub fn asymptotic_sweep(config: &SweepConfig, workers: Option<usize>) -> Result<SweepTable> {
    if config.n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParams("n_list must be strictly increasing".into()));
    }
    if config.n_list.first().is_some_and(|&n| n < 2) {
        return Err(Error::InvalidParams("the ratio needs n >= 2".into()));
    }
    let mut plan = ExperimentPlan::new(config.seed).with_w(config.w);
    for &p in &config.p_list {
        for &n in &config.n_list {
            plan = plan.with_entry(SimParams::new(n, p)?, config.trials);
        }
    }
    let out = run_plan(&plan, workers)?;
    let rows: Vec<SweepRow> = out
        .summaries
        .iter()
        .map(|s| {
            let ln = (s.n as f64).ln();
            let est = Estimate { mean: s.ratio, stderr: s.ratio_stderr, count: s.trials };
            SweepRow {
                n: s.n,
                p: s.p,
                trials: s.trials,
                mean_t: s.mean_t,
                stderr_t: s.stderr_t,
                ratio: s.ratio,
                ratio_stderr: s.ratio_stderr,
                ratio_ci: est.interval(CI_Z),
                residual: (s.mean_t - 2.0 * s.n as f64 * ln) / (s.n as f64 * ln.powf(2.0 / 3.0)),
                failures: s.failures.total(),
                max_t: s.max_t,
            }
        })
        .collect();

    let per_p = config.n_list.len();
    let mut non_monotone = Vec::new();
    for chunk in rows.chunks(per_p) {
        for pair in chunk.windows(2) {
            if pair[1].ratio_ci.0 > pair[0].ratio_ci.1 {
                non_monotone.push(MonotoneBreak { p: pair[0].p, n_before: pair[0].n, n_after: pair[1].n });
            }
        }
    }
    let mut speed = Vec::new();
    for (i, a) in rows.iter().enumerate() {
        for b in rows[i + 1..].iter().filter(|b| b.n == a.n) {
            speed.push(SpeedComparison {
                n: a.n,
                p_a: a.p,
                p_b: b.p,
                z: two_sample_z(&a.ratio_estimate(), &b.ratio_estimate()),
            });
        }
    }
    Ok(SweepTable { rows, non_monotone, speed })
}
