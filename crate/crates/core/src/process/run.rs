use rand::Rng;

use super::config::{Configuration, StepEvent};
use super::params::{Color, SimParams};
use crate::error::Result;
use crate::instrumentation::TraceStats;

/// Receives every resolved step of a trial.
///
/// Observers see the configuration *after* the step together with the event
/// that produced it, in registration order, before the next step runs.
pub trait StepObserver {
    fn on_start(&mut self, _cfg: &Configuration) {}

    fn on_step(&mut self, cfg: &Configuration, ev: &StepEvent);

    fn on_finish(&mut self, _stats: &mut TraceStats) {}
}

/// Runs the process until no particles remain or the step cap is hit.
pub fn run_to_extinction<R: Rng + ?Sized>(
    params: &SimParams,
    rng: &mut R,
    observers: &mut [&mut dyn StepObserver],
) -> Result<TraceStats> {
    let mut cfg = Configuration::new(params, rng)?;
    Ok(run_configuration(&mut cfg, params.p, params.step_cap(), rng, observers))
}

/// Runs an already built configuration; `cap` bounds the total step count.
pub fn run_configuration<R: Rng + ?Sized>(
    cfg: &mut Configuration,
    p: f64,
    cap: u64,
    rng: &mut R,
    observers: &mut [&mut dyn StepObserver],
) -> TraceStats {
    for obs in observers.iter_mut() {
        obs.on_start(cfg);
    }
    let mut stats = TraceStats { n: cfg.n(), a: cfg.a(), ..TraceStats::default() };
    while cfg.m() > 0 {
        if cfg.t() >= cap {
            stats.truncated = true;
            break;
        }
        let ev = cfg.step(p, rng);
        stats.collisions += ev.collided as u64;
        stats.bad_moves += ev.bad_move as u64;
        stats.red_moves += (ev.mover == Color::Red) as u64;
        for obs in observers.iter_mut() {
            obs.on_step(cfg, &ev);
        }
    }
    stats.t = cfg.t();
    for obs in observers.iter_mut() {
        obs.on_finish(&mut stats);
    }
    stats
}
