//! The red level process.
//!
//! A collision that lowers `R` while red is not good raises the level and
//! remembers the pre-step `R` as the threshold for coming back down. Reaching
//! a threshold pops the level; red becoming good resets it to 0.

use serde::{Deserialize, Serialize};

use crate::process::StepEvent;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Threshold {
    r: usize,
    /// Pushed by the initial `n - R_0` construction rather than a collision.
    initial: bool,
}

/// Counters describing one trace of the level process.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelSummary {
    pub initial_level: usize,
    pub max_level: usize,
    /// Collision-driven increases (the initial levels are not counted).
    pub increases: u64,
    /// Red particles remaining when the level first increased; `n` when red
    /// starts out not good.
    pub first_increase_m: Option<usize>,
    pub returns_to_zero: u64,
    /// Returns to 0 through a collision-pushed threshold that landed while
    /// red was not good.
    pub returns_to_zero_not_good: u64,
    /// Returns to 0 through the initial thresholds with red not good. Always
    /// zero: reaching the bottom threshold `n` means `R = M = n`.
    pub initial_return_violations: u64,
    pub resets: u64,
}

#[derive(Clone, Debug)]
pub struct LevelTracker {
    thresholds: Vec<Threshold>,
    summary: LevelSummary,
}

/// What a single update did to the level.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct LevelChange {
    pub pushed: bool,
    pub pops: usize,
    pub reset: bool,
}

impl LevelTracker {
    /// Starts at level 0 if red is good, else at level `n - R_0` with
    /// threshold `n - i` for returning to level `i`.
    pub fn new(n: usize, r0: usize, red_good: bool) -> Self {
        let mut summary = LevelSummary::default();
        let thresholds: Vec<Threshold> = if red_good {
            Vec::new()
        } else {
            summary.first_increase_m = Some(n);
            (0..n - r0).map(|i| Threshold { r: n - i, initial: true }).collect()
        };
        summary.initial_level = thresholds.len();
        summary.max_level = thresholds.len();
        Self { thresholds, summary }
    }

    pub fn level(&self) -> usize {
        self.thresholds.len()
    }

    /// Threshold for returning from the current level to the one below.
    pub fn top_threshold(&self) -> Option<usize> {
        self.thresholds.last().map(|t| t.r)
    }

    pub fn thresholds(&self) -> impl Iterator<Item = usize> + '_ {
        self.thresholds.iter().map(|t| t.r)
    }

    pub fn summary(&self) -> &LevelSummary {
        &self.summary
    }

    /// Applies one resolved step. `red_good_pre` classifies the state the step
    /// started from, `red_good_post` the state it produced.
    pub fn update(&mut self, ev: &StepEvent, red_good_pre: bool, red_good_post: bool) -> LevelChange {
        let mut change = LevelChange::default();

        if ev.collided && !red_good_pre && ev.r_post < ev.r_pre {
            debug_assert!(self.top_threshold().is_none_or(|top| ev.r_pre < top));
            self.thresholds.push(Threshold { r: ev.r_pre, initial: false });
            self.summary.increases += 1;
            self.summary.first_increase_m.get_or_insert(ev.m_pre);
            self.summary.max_level = self.summary.max_level.max(self.level());
            change.pushed = true;
        }

        while let Some(top) = self.thresholds.last().copied() {
            if ev.r_post < top.r {
                break;
            }
            self.thresholds.pop();
            change.pops += 1;
            if self.thresholds.is_empty() {
                self.summary.returns_to_zero += 1;
                if !red_good_post {
                    if top.initial {
                        self.summary.initial_return_violations += 1;
                    } else {
                        self.summary.returns_to_zero_not_good += 1;
                    }
                }
            }
        }

        if red_good_post && !self.thresholds.is_empty() {
            self.thresholds.clear();
            self.summary.resets += 1;
            change.reset = true;
        }
        change
    }
}
