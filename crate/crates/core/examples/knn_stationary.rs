//! Stationary reds on `K_{n,n}`: simulated totals against the harmonic-sum
//! bounds, and the order-independence of site-stack coupling.
//!
//! ```text
//! cargo run --release --example knn_stationary -- 16384
//! ```

use annihilation::experiments::{
    coupled_extinction, knn_stationary_run, Arrangement, Coupling, KnnStationaryConfig, Schedule,
};
use annihilation::rng::TrialKey;

fn main() -> annihilation::Result<()> {
    let n: usize = std::env::args().nth(1).map_or(1 << 14, |a| a.parse().expect("n"));
    for arrangement in [Arrangement::Random, Arrangement::Segregated] {
        let config = KnnStationaryConfig { n, arrangement, trials: 100, seed: 5, coupled_checks: 0 };
        let r = knn_stationary_run(&config, None)?;
        let b = r.bounds.unwrap();
        println!(
            "{arrangement:?}: T / (2n ln n) = {:.4} +- {:.4}; bounds [{:.4}, {:.4}]",
            r.ratio,
            r.ratio_stderr,
            b.ratio_lower(),
            b.ratio_upper()
        );
    }

    let mut differ = [0u32; 2];
    for trial in 0..1000 {
        let key = TrialKey::new(6, 0, trial);
        for (i, coupling) in [Coupling::SiteStacks, Coupling::BlueStreams].into_iter().enumerate() {
            let a = coupled_extinction(3, Arrangement::Random, Schedule::Sequential, coupling, key);
            let b = coupled_extinction(3, Arrangement::Random, Schedule::RoundRobin, coupling, key);
            differ[i] += (a != b) as u32;
        }
    }
    println!("n = 3, sequential vs round robin over 1000 couplings:");
    println!("  per-vertex streams: {} totals differ", differ[0]);
    println!("  per-blue streams:   {} totals differ", differ[1]);
    Ok(())
}
