//! Batch runs and the named scenarios built on them.

mod audit;
mod clustered;
mod knn;
mod plan;
mod stats;
mod sweep;

pub use audit::bias_audit;
pub use clustered::{slow_clustered_scenario, ClusterEventCounter, SlowClusteredConfig, SlowClusteredReport};
pub use knn::{
    coupled_extinction, knn_stationary_run, run_schedule, AbelianCheck, Arrangement, BlueStreams, Coupling,
    Instructions, KnnLayout, KnnStationaryConfig, KnnStationaryReport, Schedule, SharedStream, SiteStacks,
    COUPLED_CHECK_MAX_N,
};
pub use plan::{
    run_plan, run_trial, worker_count, ExperimentPlan, ExperimentSummary, FailureCounts, Manifest, OutputFormat,
    PlanEntry, PlanOutput, TrialRecord, WORKERS_ENV,
};
pub use stats::{leading_order, two_sample_z, Estimate, Moments};
pub use sweep::{asymptotic_sweep, MonotoneBreak, SpeedComparison, SweepConfig, SweepRow, SweepTable, CI_Z};
