//! Empirical check of the one-step transition bounds.
//!
//! Each sampled step is classified by its pre-step state and credited to the
//! strata it belongs to. Within a stratum we sum the per-step analytic bound
//! (a probability) and compare the observed event count with that sum; since
//! every step's true probability satisfies the bound, so does the pooled sum.

use serde::{Deserialize, Serialize};

use super::goodness::{GoodnessRule, WFunction};
use crate::process::{Configuration, StepEvent, StepObserver, Topology};

/// Running sums for a count that should dominate (or be dominated by) a sum
/// of per-step probabilities.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BoundTally {
    pub events: u64,
    pub bound_sum: f64,
    /// Sum of `b (1 - b)`, the Bernoulli variance under the bound.
    pub bound_var: f64,
}

impl BoundTally {
    fn add(&mut self, event: bool, bound: f64) {
        let b = bound.clamp(0.0, 1.0);
        self.events += event as u64;
        self.bound_sum += b;
        self.bound_var += b * (1.0 - b);
    }

    /// `(events - bound_sum) / sd`; positive means more events than the bound.
    pub fn z(&self) -> f64 {
        let sd = self.bound_var.max(1.0).sqrt();
        (self.events as f64 - self.bound_sum) / sd
    }
}

/// Up/down counts of a site counter within one stratum.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RatioTally {
    pub samples: u64,
    pub up: u64,
    pub down: u64,
    /// Observed ups against the analytic lower bound on the up probability.
    pub up_lower: BoundTally,
    /// Observed downs against the analytic upper bound on the down probability.
    pub down_upper: BoundTally,
}

impl RatioTally {
    fn add(&mut self, up: bool, down: bool, up_lb: f64, down_ub: f64) {
        self.samples += 1;
        self.up += up as u64;
        self.down += down as u64;
        self.up_lower.add(up, up_lb);
        self.down_upper.add(down, down_ub);
    }

    pub fn ratio(&self) -> f64 {
        self.up as f64 / self.down as f64
    }

    /// z-score of `up - 2 down`, whose per-step expectation is nonnegative
    /// when the up/down probability ratio is at least 2.
    pub fn z_ratio_two(&self) -> f64 {
        let x = self.up as f64 - 2.0 * self.down as f64;
        let var = (self.up as f64 + 4.0 * self.down as f64).max(1.0);
        x / var.sqrt()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StratumCheck {
    pub name: &'static str,
    pub samples: u64,
    pub statistic: f64,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BiasReport {
    pub sampled_steps: u64,
    /// Blue not good: `B` up/down.
    pub blue_not_good: RatioTally,
    /// Red not good: `R*` up/down (movement only).
    pub red_not_good: RatioTally,
    /// Neither color bad: collisions against `M / (2n (1 + 2 f(M)))`.
    pub neither_bad_collision: BoundTally,
    pub neither_bad_samples: u64,
}

impl BiasReport {
    pub fn merge(&mut self, other: &BiasReport) {
        fn ratio(a: &mut RatioTally, b: &RatioTally) {
            a.samples += b.samples;
            a.up += b.up;
            a.down += b.down;
            bound(&mut a.up_lower, &b.up_lower);
            bound(&mut a.down_upper, &b.down_upper);
        }
        fn bound(a: &mut BoundTally, b: &BoundTally) {
            a.events += b.events;
            a.bound_sum += b.bound_sum;
            a.bound_var += b.bound_var;
        }
        self.sampled_steps += other.sampled_steps;
        ratio(&mut self.blue_not_good, &other.blue_not_good);
        ratio(&mut self.red_not_good, &other.red_not_good);
        bound(&mut self.neither_bad_collision, &other.neither_bad_collision);
        self.neither_bad_samples += other.neither_bad_samples;
    }

    /// Verdicts at `z_tol` standard deviations; strata with fewer than
    /// `min_samples` sampled steps are inconclusive.
    pub fn checks(&self, min_samples: u64, z_tol: f64) -> Vec<StratumCheck> {
        let verdict = |samples: u64, ok: bool| {
            if samples < min_samples {
                Verdict::Inconclusive
            } else if ok {
                Verdict::Pass
            } else {
                Verdict::Fail
            }
        };
        let mut out = Vec::new();
        let strata = [
            (["blue_not_good.ratio_ge_2", "blue_not_good.up_lower_bound", "blue_not_good.down_upper_bound"], &self.blue_not_good),
            (["red_not_good.ratio_ge_2", "red_not_good.up_lower_bound", "red_not_good.down_upper_bound"], &self.red_not_good),
        ];
        for ([ratio, up, down], t) in strata {
            let stats = [
                (ratio, t.z_ratio_two(), t.z_ratio_two() >= -z_tol),
                (up, t.up_lower.z(), t.up_lower.z() >= -z_tol),
                (down, t.down_upper.z(), t.down_upper.z() <= z_tol),
            ];
            for (name, statistic, ok) in stats {
                out.push(StratumCheck { name, samples: t.samples, statistic, verdict: verdict(t.samples, ok) });
            }
        }
        let z = self.neither_bad_collision.z();
        out.push(StratumCheck {
            name: "neither_bad.collision_lower_bound",
            samples: self.neither_bad_samples,
            statistic: z,
            verdict: verdict(self.neither_bad_samples, z >= -z_tol),
        });
        out
    }
}

/// Samples every `every`-th step on `K_{2n}` with loops.
#[derive(Clone, Debug)]
pub struct BiasAuditor {
    rule: GoodnessRule,
    n: f64,
    p: f64,
    every: u64,
    report: BiasReport,
}

impl BiasAuditor {
    pub fn new(n: usize, p: f64, w: WFunction, every: u64) -> Self {
        Self {
            rule: GoodnessRule::new(n, w),
            n: n as f64,
            p,
            every: every.max(1),
            report: BiasReport::default(),
        }
    }

    pub fn report(&self) -> &BiasReport {
        &self.report
    }

    pub fn into_report(self) -> BiasReport {
        self.report
    }

    fn record(&mut self, ev: &StepEvent) {
        let (p, q, two_n) = (self.p, 1.0 - self.p, 2.0 * self.n);
        let m = ev.m_pre;
        let (mf, r, b) = (m as f64, ev.r_pre as f64, ev.b_pre as f64);
        let blue = self.rule.classify(ev.b_pre, m);
        let red = self.rule.classify(ev.r_pre, m);
        self.report.sampled_steps += 1;

        if !blue.is_good() {
            let up_lb = q * (mf - b) / mf * (two_n - b - r) / two_n;
            let down_ub = q * b / mf * (b + r) / two_n + p * b / two_n;
            self.report
                .blue_not_good
                .add(ev.b_post > ev.b_pre, ev.b_post < ev.b_pre, up_lb, down_ub);
        }
        if !red.is_good() {
            let up_lb = p * (mf - r) / mf * (two_n - r) / two_n;
            let down_ub = p * r / mf * (r - 1.0) / two_n;
            self.report
                .red_not_good
                .add(ev.r_star > ev.r_pre, ev.r_star < ev.r_pre, up_lb, down_ub);
        }
        if !blue.is_bad() && !red.is_bad() {
            let bound = mf / (two_n * (1.0 + 2.0 * self.rule.f(m)));
            self.report.neither_bad_collision.add(ev.collided, bound);
            self.report.neither_bad_samples += 1;
        }
    }
}

impl StepObserver for BiasAuditor {
    fn on_start(&mut self, cfg: &Configuration) {
        assert_eq!(
            cfg.topology(),
            Topology::CompleteWithLoops,
            "the transition bounds assume uniform targets over all 2n vertices"
        );
    }

    fn on_step(&mut self, cfg: &Configuration, ev: &StepEvent) {
        if (cfg.t() - 1) % self.every == 0 {
            self.record(ev);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::process::{Color, Placement, SimParams};
    use crate::rng::TrialKey;

    #[test]
    fn tally_z_sign() {
        let mut t = BoundTally::default();
        for i in 0..100 {
            t.add(i % 2 == 0, 0.3);
        }
        assert_eq!(t.events, 50);
        assert!((t.bound_sum - 30.0).abs() < 1e-9);
        assert!(t.z() > 0.0);
    }

    #[test]
    fn ratio_two_statistic() {
        let mut r = RatioTally::default();
        for _ in 0..20 {
            r.add(true, false, 0.5, 0.1);
        }
        for _ in 0..10 {
            r.add(false, true, 0.5, 0.1);
        }
        assert_eq!(r.ratio(), 2.0);
        assert_eq!(r.z_ratio_two(), 0.0);
    }

    #[test]
    fn merge_adds_everything() {
        let params = SimParams::new(64, 0.5).unwrap();
        let mut a = BiasAuditor::new(64, 0.5, WFunction::default(), 1);
        let mut b = BiasAuditor::new(64, 0.5, WFunction::default(), 1);
        crate::process::run_to_extinction(&params, &mut TrialKey::new(1, 0, 0).rng(), &mut [&mut a]).unwrap();
        crate::process::run_to_extinction(&params, &mut TrialKey::new(1, 0, 1).rng(), &mut [&mut b]).unwrap();
        let mut pooled = a.report().clone();
        pooled.merge(b.report());
        assert_eq!(pooled.sampled_steps, a.report().sampled_steps + b.report().sampled_steps);
        assert_eq!(
            pooled.neither_bad_collision.events,
            a.report().neither_bad_collision.events + b.report().neither_bad_collision.events
        );
    }

    #[test]
    fn sparse_strata_are_inconclusive() {
        let report = BiasReport::default();
        assert!(report.checks(1, 3.0).iter().all(|c| c.verdict == Verdict::Inconclusive));
    }

    #[test]
    fn decimation_samples_every_kth_step() {
        let params = SimParams::new(32, 0.5).unwrap();
        let mut auditor = BiasAuditor::new(32, 0.5, WFunction::default(), 7);
        let s = crate::process::run_to_extinction(&params, &mut TrialKey::new(2, 0, 0).rng(), &mut [&mut auditor])
            .unwrap();
        assert_eq!(auditor.report().sampled_steps, s.t.div_ceil(7));
    }

    #[test]
    fn blue_pile_is_not_good_and_drifts_up() {
        // all blues on one vertex: B = 1, far from good
        let n = 200;
        let mut placements = vec![Placement { vertex: 0, color: Color::Blue, count: n }];
        placements.extend((1..=n).map(|v| Placement { vertex: v, color: Color::Red, count: 1 }));
        let params = SimParams::new(n, 0.5).unwrap().with_init(crate::process::InitSpec::Explicit(placements));
        let mut pooled = BiasReport::default();
        for trial in 0..20 {
            let mut a = BiasAuditor::new(n, 0.5, WFunction::default(), 1);
            crate::process::run_to_extinction(&params, &mut TrialKey::new(3, 0, trial).rng(), &mut [&mut a]).unwrap();
            pooled.merge(a.report());
        }
        assert!(pooled.blue_not_good.samples > 0);
        assert!(pooled.blue_not_good.ratio() >= 2.0);
    }
}
