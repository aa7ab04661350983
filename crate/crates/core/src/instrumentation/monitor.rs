use super::goodness::{Goodness, GoodnessRule, WFunction};
use super::level::LevelTracker;
use super::trace::{FailureKind, SeriesPoint, TauOutcome, TimeDecomposition, TraceStats};
use crate::process::{Configuration, StepEvent, StepObserver};

/// `floor((ln n)^2)`, the particle count at which tau succeeds.
pub fn tau_success_count(n: usize) -> usize {
    let l = (n as f64).ln();
    (l * l).floor() as usize
}

/// Snapshot of both classifications at one instant.
#[derive(Clone, Copy, Debug)]
struct Classes {
    blue: Goodness,
    red: Goodness,
}

/// Tracks the stopping time tau, the red level and the four-part bound
/// `T <= T_blue + T_red + T_late + T_ok` for one trial.
///
/// Step `t` (the transition from time `t` to `t + 1`) is attributed using the
/// state at time `t`. Goodness and the tau conditions are evaluated on
/// resolved states only.
#[derive(Clone, Debug)]
pub struct ProofMonitor {
    rule: GoodnessRule,
    success_count: usize,
    timeout: u64,
    level: Option<LevelTracker>,
    current: Option<Classes>,
    blue_ever_good: bool,
    genesis_blue: Option<u64>,
    genesis_red: Option<u64>,
    tau: Option<(u64, TauOutcome)>,
    t_blue: u64,
    t_red: u64,
    t_late: u64,
    t_ok: u64,
}

impl ProofMonitor {
    pub fn new(n: usize, w: WFunction) -> Self {
        Self {
            rule: GoodnessRule::new(n, w),
            success_count: tau_success_count(n),
            timeout: 3 * (n as u64) * (n as u64),
            level: None,
            current: None,
            blue_ever_good: false,
            genesis_blue: None,
            genesis_red: None,
            tau: None,
            t_blue: 0,
            t_red: 0,
            t_late: 0,
            t_ok: 0,
        }
    }

    pub fn level(&self) -> usize {
        self.level.as_ref().map_or(0, LevelTracker::level)
    }

    pub fn tau(&self) -> Option<(u64, TauOutcome)> {
        self.tau
    }

    fn classes(&self, m: usize, r: usize, b: usize) -> Option<Classes> {
        (m > 0).then(|| Classes {
            blue: self.rule.classify(b, m),
            red: self.rule.classify(r, m),
        })
    }

    fn check_tau(&mut self, t: u64, m: usize, classes: Option<Classes>) {
        if self.tau.is_some() {
            return;
        }
        let blue_bad = classes.is_some_and(|c| c.blue.is_bad());
        let red_bad = classes.is_some_and(|c| c.red.is_bad());
        // a simultaneous failure beats success, which must be strictly first
        let failure = if blue_bad && self.blue_ever_good {
            Some((FailureKind::BlueBad, self.genesis_blue))
        } else if red_bad && self.level() == 0 {
            Some((FailureKind::RedBadAtLevelZero, self.genesis_red))
        } else if t >= self.timeout {
            Some((FailureKind::Timeout, None))
        } else {
            None
        };
        if let Some((kind, genesis)) = failure {
            self.tau = Some((t, TauOutcome::Failure { kind, genesis }));
        } else if m == self.success_count {
            self.tau = Some((t, TauOutcome::Success));
        }
    }

    fn note_genesis(&mut self, t: u64, before: Option<Classes>, after: Option<Classes>) {
        if let (Some(b), Some(a)) = (before, after) {
            if b.blue.is_good() && !a.blue.is_good() {
                self.genesis_blue = Some(t);
            }
            if b.red.is_good() && !a.red.is_good() {
                self.genesis_red = Some(t);
            }
        }
    }
}

impl StepObserver for ProofMonitor {
    fn on_start(&mut self, cfg: &Configuration) {
        let classes = self.classes(cfg.m(), cfg.r(), cfg.b());
        let red_good = classes.is_some_and(|c| c.red.is_good());
        self.level = Some(LevelTracker::new(cfg.n(), cfg.r(), red_good));
        self.blue_ever_good = classes.is_some_and(|c| c.blue.is_good());
        self.current = classes;
        self.check_tau(cfg.t(), cfg.m(), classes);
    }

    fn on_step(&mut self, cfg: &Configuration, ev: &StepEvent) {
        let t = cfg.t() - 1;
        let pre = self.current.expect("on_step before on_start");
        let level = self.level();
        let before_tau = self.tau.is_none_or(|(tau, _)| t < tau);

        if !self.blue_ever_good {
            self.t_blue += 1;
        }
        if level > 0 {
            self.t_red += 1;
        }
        if !before_tau && level == 0 {
            self.t_late += 1;
        }
        if before_tau && !pre.blue.is_bad() && !pre.red.is_bad() {
            self.t_ok += 1;
        }

        let post = self.classes(cfg.m(), cfg.r(), cfg.b());
        let red_good_post = post.is_some_and(|c| c.red.is_good());
        self.level
            .as_mut()
            .expect("on_step before on_start")
            .update(ev, pre.red.is_good(), red_good_post);
        self.note_genesis(cfg.t(), Some(pre), post);
        if post.is_some_and(|c| c.blue.is_good()) {
            self.blue_ever_good = true;
        }
        if let Some(post) = post {
            self.current = Some(post);
        }
        self.check_tau(cfg.t(), cfg.m(), post);
    }

    fn on_finish(&mut self, stats: &mut TraceStats) {
        let (tau_time, tau_outcome) = match self.tau {
            Some((t, outcome)) => (Some(t), outcome),
            None => (None, TauOutcome::NotReached),
        };
        let decomposition = TimeDecomposition {
            t_blue: self.t_blue,
            t_red: self.t_red,
            t_late: self.t_late,
            t_ok: self.t_ok,
            tau_time,
            tau_outcome,
            reliable: !stats.truncated,
        };
        if decomposition.reliable {
            assert!(
                decomposition.covers(stats.t),
                "T = {} exceeds T_blue + T_red + T_late + T_ok = {:?}",
                stats.t,
                decomposition
            );
        }
        stats.decomposition = Some(decomposition);
        stats.level = self.level.as_ref().map(|l| l.summary().clone());
    }
}

/// Records `(t, M, R, B)` every `every` steps, plus the start and the end.
#[derive(Clone, Debug)]
pub struct SeriesRecorder {
    every: u64,
    points: Vec<SeriesPoint>,
}

impl SeriesRecorder {
    pub fn new(every: u64) -> Self {
        Self { every: every.max(1), points: Vec::new() }
    }

    fn push(&mut self, cfg: &Configuration) {
        self.points.push(SeriesPoint { t: cfg.t(), m: cfg.m(), r: cfg.r(), b: cfg.b() });
    }
}

impl StepObserver for SeriesRecorder {
    fn on_start(&mut self, cfg: &Configuration) {
        self.push(cfg);
    }

    fn on_step(&mut self, cfg: &Configuration, _ev: &StepEvent) {
        if cfg.t() % self.every == 0 || cfg.m() == 0 {
            self.push(cfg);
        }
    }

    fn on_finish(&mut self, stats: &mut TraceStats) {
        stats.series = std::mem::take(&mut self.points);
    }
}
