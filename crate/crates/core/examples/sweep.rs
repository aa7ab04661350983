//! Mean extinction time over `2 n ln n` for growing `n` at two red speeds.
//!
//! ```text
//! cargo run --release --example sweep
//! ```

use annihilation::experiments::{asymptotic_sweep, SweepConfig};
use annihilation::instrumentation::WFunction;

fn main() -> annihilation::Result<()> {
    let config = SweepConfig {
        n_list: vec![1 << 8, 1 << 10, 1 << 12],
        p_list: vec![0.5, 0.1],
        trials: 100,
        seed: 42,
        w: WFunction::default(),
    };
    let table = asymptotic_sweep(&config, None)?;
    println!("{:>6} {:>5} {:>8} {:>18} {:>9}", "n", "p", "ratio", "95% interval", "residual");
    for r in &table.rows {
        println!(
            "{:>6} {:>5} {:>8.4} {:>8.4} .. {:<7.4} {:>9.4}",
            r.n, r.p, r.ratio, r.ratio_ci.0, r.ratio_ci.1, r.residual
        );
    }
    for s in &table.speed {
        println!("n = {}: p = {} vs p = {} differ by z = {:+.2}", s.n, s.p_a, s.p_b, s.z);
    }
    if !table.non_monotone.is_empty() {
        println!("ratio rose with n: {:?}", table.non_monotone);
    }
    Ok(())
}
