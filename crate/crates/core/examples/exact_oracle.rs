//! Exact expected extinction times for tiny systems, set against simulation.
//!
//! ```text
//! cargo run --release --example exact_oracle
//! ```

use annihilation::experiments::{run_plan, ExperimentPlan};
use annihilation::oracles::{exact_chain, exact_extinction_expectation};
use annihilation::process::{InitSpec, SimParams, Topology};

fn main() -> annihilation::Result<()> {
    let cases = [
        ("K_2", SimParams::new(1, 0.5)?),
        ("K_4 default", SimParams::new(2, 0.5)?),
        ("K_4 default, p = 0.1", SimParams::new(2, 0.1)?),
        ("K_4 clustered", SimParams::new(2, 0.5)?.with_init(InitSpec::ClusteredRed)),
        ("K_2,2 default", SimParams::new(2, 0.5)?.with_topology(Topology::Bipartite)),
        ("K_6 default", SimParams::new(3, 0.5)?),
        ("K_8 disjoint:1", SimParams::new(4, 0.3)?.with_init(InitSpec::DisjointSites { a: 1 })),
    ];
    println!("{:<22} {:>7} {:>10} {:>18}", "system", "states", "exact", "simulated");
    for (name, params) in cases {
        let states = exact_chain(&params)?.states().len();
        let exact = exact_extinction_expectation(&params)?;
        let out = run_plan(&ExperimentPlan::single(params.with_step_cap(1_000_000), 50_000, 7), None)?;
        let s = &out.summaries[0];
        println!("{name:<22} {states:>7} {exact:>10.5} {:>10.5} +- {:.5}", s.mean_t, s.stderr_t);
    }
    Ok(())
}
