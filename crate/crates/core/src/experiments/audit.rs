use super::plan::ordered_map;
use crate::error::{Error, Result};
use crate::instrumentation::{BiasAuditor, BiasReport, WFunction};
use crate::process::{run_to_extinction, SimParams, Topology};
use crate::rng::TrialKey;

/// Pools the one-step bias audit over `trials` runs, sampling every
/// `every`-th step.
pub fn bias_audit(
    params: &SimParams,
    trials: u32,
    seed: u64,
    every: u64,
    w: WFunction,
    workers: Option<usize>,
) -> Result<BiasReport> {
    params.validate()?;
    if params.topology != Topology::CompleteWithLoops {
        return Err(Error::InvalidParams("the bias audit covers the complete graph with loops only".into()));
    }
    let reports = ordered_map((0..trials).collect(), workers, |trial| {
        let mut auditor = BiasAuditor::new(params.n, params.p, w, every);
        run_to_extinction(params, &mut TrialKey::new(seed, 0, trial).rng(), &mut [&mut auditor])?;
        Ok::<_, Error>(auditor.into_report())
    });
    let mut pooled = BiasReport::default();
    for r in reports {
        pooled.merge(&r?);
    }
    Ok(pooled)
}
