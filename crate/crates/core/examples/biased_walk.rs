//! The biased-walk solver and the exhaustive drift-inequality scan.
//!
//! ```text
//! cargo run --release --example biased_walk
//! ```

use annihilation::instrumentation::WFunction;
use annihilation::oracles::{bias_inequality_scan, biased_walk_solve, BiasedWalkSolution, BiasedWalkSpec};

fn main() -> annihilation::Result<()> {
    println!("{:>3} {:>6} {:>12} {:>12} {:>10} {:>10}", "k", "alpha", "P(hit 0)", "2^(1-k)", "E[time]", "2/alpha");
    for (k, alpha) in [(1, 0.5), (2, 2.0 / 3.0), (5, 0.4), (10, 0.2), (20, 0.05)] {
        // the extremal walk: up = alpha, down = alpha / 2
        let spec = BiasedWalkSpec::homogeneous(k, alpha, alpha, alpha / 2.0)?;
        let sol = biased_walk_solve(&spec)?;
        println!(
            "{k:>3} {alpha:>6.3} {:>12.3e} {:>12.3e} {:>10.4} {:>10.4}",
            sol.hit_zero_before_k,
            BiasedWalkSolution::hit_bound(k),
            sol.expected_time_to_k,
            BiasedWalkSolution::time_bound(alpha)
        );
    }
    let violations = bias_inequality_scan(256, WFunction::default());
    println!("drift inequality violations for n <= 256: {}", violations.len());
    Ok(())
}
