//! A multi-entry plan written as CSV and JSON, with the manifest.
//!
//! ```text
//! cargo run --release --example plan_outputs -- /tmp/annihilation
//! ```

use std::path::PathBuf;

use annihilation::experiments::{run_plan, ExperimentPlan, OutputFormat};
use annihilation::process::{InitSpec, SimParams, Topology};

fn main() -> annihilation::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "target/plan-outputs".into()));
    std::fs::create_dir_all(&dir)?;
    let plan = ExperimentPlan::new(2718)
        .with_entry(SimParams::new(512, 0.5)?, 50)
        .with_entry(SimParams::new(512, 0.1)?.with_init(InitSpec::clustered_blue(512)), 50)
        .with_entry(SimParams::new(512, 0.5)?.with_topology(Topology::Bipartite), 50)
        .with_decimate(512);
    let out = run_plan(&plan, None)?;
    out.write(&dir.join("trials.csv"), OutputFormat::Csv)?;
    out.write(&dir.join("trials.json"), OutputFormat::Json)?;
    println!("plan {} -> {}", out.manifest.plan_hash, dir.display());
    for s in &out.summaries {
        println!(
            "entry {}: {} p={} mean T {:.1} +- {:.1}, ratio {:.3}; T_blue {:.0}, T_red {:.0}, T_late {:.0}, T_ok {:.0}",
            s.entry, s.init_variant, s.p, s.mean_t, s.stderr_t, s.ratio, s.mean_t_blue, s.mean_t_red, s.mean_t_late, s.mean_t_ok
        );
    }
    Ok(())
}
