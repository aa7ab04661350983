//! One trial with the proof monitor and a decimated `(t, M, R, B)` series.
//!
//! ```text
//! cargo run --release --example simulate -- 4096 0.5
//! ```

use annihilation::instrumentation::{ProofMonitor, SeriesRecorder, WFunction};
use annihilation::process::{run_to_extinction, SimParams, StepObserver};
use annihilation::rng::TrialKey;

fn main() -> annihilation::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(4096, |a| a.parse().expect("n"));
    let p: f64 = args.next().map_or(0.5, |a| a.parse().expect("p"));
    let params = SimParams::new(n, p)?;

    let mut monitor = ProofMonitor::new(n, WFunction::default());
    let mut series = SeriesRecorder::new((n as u64).max(1));
    let observers: &mut [&mut dyn StepObserver] = &mut [&mut monitor, &mut series];
    let stats = run_to_extinction(&params, &mut TrialKey::new(1, 0, 0).rng(), observers)?;

    let d = stats.decomposition.as_ref().unwrap();
    let scale = 2.0 * n as f64 * (n as f64).ln();
    println!("n = {n}, p = {p}");
    println!("T = {} ({:.3} x 2n ln n)", stats.t, stats.t as f64 / scale);
    println!(
        "T_blue = {}, T_red = {}, T_late = {}, T_ok = {} (sum {})",
        d.t_blue,
        d.t_red,
        d.t_late,
        d.t_ok,
        d.total()
    );
    println!("tau at {:?}: {}", d.tau_time, d.tau_outcome.label());
    println!("collisions {}, bad moves {}, L = {:?}", stats.collisions, stats.bad_moves, stats.l());
    println!();
    println!("{:>10} {:>6} {:>6} {:>6}", "t", "M", "R", "B");
    for pt in stats.series.iter().step_by((stats.series.len() / 20).max(1)) {
        println!("{:>10} {:>6} {:>6} {:>6}", pt.t, pt.m, pt.r, pt.b);
    }
    Ok(())
}
