//! Pooled empirical check of the one-step transition bounds.
//!
//! ```text
//! cargo run --release --example bias_audit -- 1024 0.3
//! ```

use annihilation::experiments::bias_audit;
use annihilation::instrumentation::WFunction;
use annihilation::process::SimParams;

fn main() -> annihilation::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(1024, |a| a.parse().expect("n"));
    let p: f64 = args.next().map_or(0.3, |a| a.parse().expect("p"));
    let report = bias_audit(&SimParams::new(n, p)?, 50, 8, 1, WFunction::default(), None)?;
    println!("{} sampled steps", report.sampled_steps);
    println!(
        "blue not good: {} samples, up/down = {:.2}",
        report.blue_not_good.samples,
        report.blue_not_good.ratio()
    );
    println!(
        "red not good:  {} samples, up/down = {:.2}",
        report.red_not_good.samples,
        report.red_not_good.ratio()
    );
    for c in report.checks(500, 4.0) {
        println!("{:<36} {:>8} {:>+8.2} {:?}", c.name, c.samples, c.statistic, c.verdict);
    }
    Ok(())
}
