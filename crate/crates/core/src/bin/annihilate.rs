//! Command-line front end. Exit status: 0 on success, 1 on bad arguments or
//! runtime errors, 2 when a scenario lands outside its acceptance band.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use annihilation::experiments::{
    asymptotic_sweep, bias_audit, knn_stationary_run, run_plan, slow_clustered_scenario, Arrangement,
    ExperimentPlan, KnnStationaryConfig, OutputFormat, SlowClusteredConfig, SweepConfig,
};
use annihilation::instrumentation::{Verdict, WFunction};
use annihilation::oracles::oracle_bake;
use annihilation::process::{InitSpec, Placement, SimParams, Topology};
use annihilation::{Error, Result};

#[derive(Parser)]
#[command(name = "annihilate", version, about = "Two-type annihilating random walk lab")]
struct Cli {
    /// Worker threads (defaults to ANNIHILATION_WORKERS, then all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run independent trials of one parameter set.
    Simulate(SimulateArgs),
    /// Ratio of mean extinction time to 2 n ln n across n and p.
    Sweep(SweepArgs),
    /// Recompute the frozen oracle constants.
    OracleBake {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    #[command(subcommand)]
    Scenario(Scenario),
    #[command(subcommand)]
    Audit(Audit),
}

#[derive(Subcommand)]
enum Scenario {
    /// Clustered reds with slow reds, run for 3 n ln n steps.
    SlowClustered(SlowArgs),
    /// Stationary reds on the complete bipartite graph.
    KnnStationary(KnnArgs),
}

#[derive(Subcommand)]
enum Audit {
    /// Pooled check of the one-step transition bounds.
    Bias(AuditArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Csv => OutputFormat::Csv,
            Format::Json => OutputFormat::Json,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum TopologyArg {
    Complete,
    Bipartite,
}

impl From<TopologyArg> for Topology {
    fn from(t: TopologyArg) -> Self {
        match t {
            TopologyArg::Complete => Topology::CompleteWithLoops,
            TopologyArg::Bipartite => Topology::Bipartite,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ArrangementArg {
    Random,
    Segregated,
}

#[derive(Args)]
struct Common {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    trials: u32,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0.5)]
    p: f64,
    /// default | disjoint:A | clustered | file:PATH (JSON placements)
    #[arg(long, default_value = "default")]
    init: String,
    #[arg(long, value_enum, default_value = "complete")]
    topology: TopologyArg,
    #[arg(long, default_value_t = 1.0 / 3.0)]
    w_exponent: f64,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Record (t, M, R, B) every this many steps (JSON output only).
    #[arg(long)]
    decimate: Option<u64>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, value_delimiter = ',', default_values_t = [1024usize, 4096, 16384])]
    n: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_values_t = [0.5, 0.1])]
    p: Vec<f64>,
    #[arg(long, default_value_t = 1.0 / 3.0)]
    w_exponent: f64,
    /// Lower edge of the acceptance band for the ratio.
    #[arg(long, default_value_t = 0.85)]
    band_lo: f64,
    #[arg(long, default_value_t = 1.3)]
    band_hi: f64,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct SlowArgs {
    #[arg(long, default_value_t = 16384)]
    n: usize,
    /// Red speed; defaults to 1 / (4 ln n). Bands are only checked at the default.
    #[arg(long)]
    p: Option<f64>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct KnnArgs {
    #[arg(long, default_value_t = 16384)]
    n: usize,
    #[arg(long, value_enum, default_value = "random")]
    arrangement: ArrangementArg,
    /// Coupled schedule comparisons per trial (small n only).
    #[arg(long, default_value_t = 1)]
    coupled_checks: u32,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct AuditArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0.5)]
    p: f64,
    #[arg(long, default_value_t = 1)]
    every: u64,
    #[arg(long, default_value_t = 1000)]
    min_samples: u64,
    #[arg(long, default_value_t = 4.0)]
    z: f64,
    #[arg(long, default_value_t = 1.0 / 3.0)]
    w_exponent: f64,
    #[command(flatten)]
    common: Common,
}

enum Outcome {
    Ok,
    BandViolation(String),
}

fn parse_init(spec: &str) -> Result<InitSpec> {
    match spec.strip_prefix("file:") {
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            let placements: Vec<Placement> = serde_json::from_str(&text)?;
            Ok(InitSpec::Explicit(placements))
        }
        None => spec.parse(),
    }
}

fn emit_json<T: Serialize>(value: &T, out: Option<&Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(value)? + "\n";
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn band(ok: bool, why: impl FnOnce() -> String) -> Outcome {
    if ok {
        Outcome::Ok
    } else {
        Outcome::BandViolation(why())
    }
}

fn run(cli: Cli) -> Result<Outcome> {
    let workers = cli.workers;
    match cli.command {
        Command::Simulate(a) => {
            let params = SimParams::new(a.n, a.p)?
                .with_topology(a.topology.into())
                .with_init(parse_init(&a.init)?);
            params.validate()?;
            let mut plan = ExperimentPlan::single(params, a.common.trials, a.common.seed).with_w(WFunction::new(a.w_exponent)?);
            if let Some(every) = a.decimate {
                plan = plan.with_decimate(every);
            }
            let out = run_plan(&plan, workers)?;
            for s in &out.summaries {
                eprintln!(
                    "n={} p={} trials={} mean_T={:.3} stderr={:.3} ratio={:.4} failures={} truncated={}",
                    s.n, s.p, s.trials, s.mean_t, s.stderr_t, s.ratio, s.failures.total(), s.truncated
                );
            }
            match &a.common.out {
                Some(path) => out.write(path, a.format.into())?,
                None => match a.format {
                    Format::Csv => print!("{}", out.to_csv()?),
                    Format::Json => print!("{}", out.to_json()?),
                },
            }
            Ok(Outcome::Ok)
        }
        Command::Sweep(a) => {
            let config = SweepConfig {
                n_list: a.n,
                p_list: a.p,
                trials: a.common.trials,
                seed: a.common.seed,
                w: WFunction::new(a.w_exponent)?,
            };
            let table = asymptotic_sweep(&config, workers)?;
            emit_json(&table, a.common.out.as_deref())?;
            Ok(band(
                table.ratios_within(a.band_lo, a.band_hi) && table.non_monotone.is_empty() && table.max_speed_z() <= 3.0,
                || "sweep ratios left the band, rose with n, or differ across speeds".into(),
            ))
        }
        Command::OracleBake { out } => {
            let text = oracle_bake()?.render()?;
            match out {
                Some(path) => std::fs::write(path, text)?,
                None => print!("{text}"),
            }
            Ok(Outcome::Ok)
        }
        Command::Scenario(Scenario::SlowClustered(a)) => {
            let config = SlowClusteredConfig { n: a.n, p: a.p, trials: a.common.trials, seed: a.common.seed };
            let report = slow_clustered_scenario(&config, workers)?;
            emit_json(&report, a.common.out.as_deref())?;
            Ok(band(
                a.p.is_some() || (report.survival_fraction >= 0.99 && report.all_events_within_tolerance()),
                || "clustered start went extinct too often or the event count drifted".into(),
            ))
        }
        Command::Scenario(Scenario::KnnStationary(a)) => {
            let config = KnnStationaryConfig {
                n: a.n,
                arrangement: match a.arrangement {
                    ArrangementArg::Random => Arrangement::Random,
                    ArrangementArg::Segregated => Arrangement::Segregated,
                },
                trials: a.common.trials,
                seed: a.common.seed,
                coupled_checks: a.coupled_checks,
            };
            let report = knn_stationary_run(&config, workers)?;
            emit_json(&report, a.common.out.as_deref())?;
            let ok = (0.8..=1.2).contains(&report.ratio)
                && report.lower_z.is_none_or(|z| z >= -3.0)
                && report.abelian.as_ref().is_none_or(|c| c.mismatches == 0);
            Ok(band(ok, || "stationary-red run outside its band".into()))
        }
        Command::Audit(Audit::Bias(a)) => {
            let params = SimParams::new(a.n, a.p)?;
            let report = bias_audit(&params, a.common.trials, a.common.seed, a.every, WFunction::new(a.w_exponent)?, workers)?;
            let checks = report.checks(a.min_samples, a.z);
            #[derive(Serialize)]
            struct Doc<'a> {
                report: &'a annihilation::instrumentation::BiasReport,
                checks: &'a [annihilation::instrumentation::StratumCheck],
            }
            emit_json(&Doc { report: &report, checks: &checks }, a.common.out.as_deref())?;
            Ok(band(checks.iter().all(|c| c.verdict != Verdict::Fail), || {
                "a transition bound failed".into()
            }))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::BandViolation(why)) => {
            eprintln!("band violation: {why}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            if let Error::Output { records_written, .. } = e {
                eprintln!("{records_written} records were written before the failure");
            }
            ExitCode::from(1)
        }
    }
}
