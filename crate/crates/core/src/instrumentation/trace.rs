use serde::{Deserialize, Serialize};

use super::level::LevelSummary;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureKind {
    /// Blue became bad after having been good.
    BlueBad,
    /// Red became bad while at level 0.
    RedBadAtLevelZero,
    /// The step count reached `3 n^2`.
    Timeout,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TauOutcome {
    Success,
    Failure {
        kind: FailureKind,
        /// Last time the failing color stopped being good.
        genesis: Option<u64>,
    },
    NotReached,
}

impl TauOutcome {
    pub fn label(&self) -> &'static str {
        match self {
            TauOutcome::Success => "success",
            TauOutcome::Failure { kind: FailureKind::BlueBad, .. } => "failure_ii",
            TauOutcome::Failure { kind: FailureKind::RedBadAtLevelZero, .. } => "failure_iii",
            TauOutcome::Failure { kind: FailureKind::Timeout, .. } => "failure_iv",
            TauOutcome::NotReached => "not_reached",
        }
    }

    pub fn is_failure(&self) -> bool {
        matches!(self, TauOutcome::Failure { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TimeDecomposition {
    /// Steps before blue is first good.
    pub t_blue: u64,
    /// Steps taken with red above level 0.
    pub t_red: u64,
    /// Steps at or after tau with red at level 0.
    pub t_late: u64,
    /// Steps before tau with neither color bad.
    pub t_ok: u64,
    pub tau_time: Option<u64>,
    pub tau_outcome: TauOutcome,
    /// False when the trace was truncated.
    pub reliable: bool,
}

impl TimeDecomposition {
    pub fn total(&self) -> u64 {
        self.t_blue + self.t_red + self.t_late + self.t_ok
    }

    pub fn covers(&self, t: u64) -> bool {
        t <= self.total()
    }
}

/// A decimated `(t, M, R, B)` sample.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesPoint {
    pub t: u64,
    pub m: usize,
    pub r: usize,
    pub b: usize,
}

/// Everything recorded about one trial.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TraceStats {
    pub n: usize,
    /// Extinction time, or the cap when truncated.
    pub t: u64,
    pub decomposition: Option<TimeDecomposition>,
    /// Collisions.
    pub collisions: u64,
    /// Bad moves: red onto a different red-occupied vertex.
    pub bad_moves: u64,
    pub red_moves: u64,
    pub a: usize,
    pub level: Option<LevelSummary>,
    pub truncated: bool,
    pub series: Vec<SeriesPoint>,
}

impl TraceStats {
    /// Red particles left at the first level increase.
    pub fn l(&self) -> Option<usize> {
        self.level.as_ref().and_then(|l| l.first_increase_m)
    }
}
