//! A red pile moving at speed 1/(4 ln n) outlives `3 n ln n` steps; at
//! constant speed the same start dies out on the usual time scale.
//!
//! ```text
//! cargo run --release --example slow_clustered -- 4096
//! ```

use annihilation::experiments::{run_plan, slow_clustered_scenario, ExperimentPlan, SlowClusteredConfig};
use annihilation::process::{InitSpec, SimParams};

fn main() -> annihilation::Result<()> {
    let n: usize = std::env::args().nth(1).map_or(4096, |a| a.parse().expect("n"));
    let report = slow_clustered_scenario(&SlowClusteredConfig { n, p: None, trials: 50, seed: 3 }, None)?;
    println!("n = {n}, p = {:.5}, horizon {} steps", report.p, report.horizon);
    println!("alive at the horizon: {}/{}", report.survived_horizon, report.trials);
    println!(
        "red moves + blue arrivals at the pile: {:.1} +- {:.1} (3pn ln n = {:.1}, tolerance {:.0})",
        report.events.mean, report.events.stderr, report.predicted_red_moves, report.event_tolerance
    );
    println!("particles left per color: {:.1}", report.mean_survivors);

    let fast = SimParams::new(n, 0.5)?.with_init(InitSpec::ClusteredRed);
    let out = run_plan(&ExperimentPlan::single(fast, 50, 4), None)?;
    let s = &out.summaries[0];
    println!("same start at p = 1/2: T / (2n ln n) = {:.3} +- {:.3}", s.ratio, s.ratio_stderr);
    Ok(())
}
