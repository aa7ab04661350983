//! Observers implementing the bookkeeping of the extinction-time bound:
//! the `f(m)` classifier, the red level process, the stopping time tau and
//! the four-part decomposition of `T`.

mod audit;
mod goodness;
mod level;
mod monitor;
mod trace;

pub use audit::{BiasAuditor, BiasReport, BoundTally, RatioTally, StratumCheck, Verdict};
pub use goodness::{classify, f, Goodness, GoodnessRule, WFunction};
pub use level::{LevelChange, LevelSummary, LevelTracker};
pub use monitor::{tau_success_count, ProofMonitor, SeriesRecorder};
pub use trace::{FailureKind, SeriesPoint, TauOutcome, TimeDecomposition, TraceStats};
