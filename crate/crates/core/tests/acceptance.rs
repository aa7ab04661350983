//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::time::{Duration, Instant};

use rand::Rng;

use annihilation::experiments::{
    asymptotic_sweep, coupled_extinction, knn_stationary_run, run_plan, slow_clustered_scenario,
    Arrangement, Coupling, ExperimentPlan, KnnStationaryConfig, PlanOutput, Schedule, SlowClusteredConfig,
    SweepConfig,
};
use annihilation::instrumentation::WFunction;
use annihilation::oracles::{
    alternating_identity_check, bias_inequality_scan, biased_walk_solve, AlternatingTrialSpec, BiasedWalkSolution,
    BiasedWalkSpec, OracleConstants,
};
use annihilation::process::{InitSpec, SimParams, Topology};
use annihilation::rng::stream_rng;

struct Verdict {
    id: u8,
    name: &'static str,
    pass: bool,
    detail: String,
    elapsed: Duration,
}

/// Per-entry statistics kept for the global step-count bound.
struct EntryStat {
    origin: &'static str,
    n: usize,
    mean: f64,
    stderr: f64,
    max_t: u64,
}

#[derive(Default)]
struct Suite {
    verdicts: Vec<Verdict>,
    entries: Vec<EntryStat>,
    decomposition_checked: u64,
    decomposition_violations: u64,
}

impl Suite {
    fn record(&mut self, id: u8, name: &'static str, start: Instant, (pass, detail): (bool, String)) {
        let elapsed = start.elapsed();
        println!(
            "{} criterion {id:>2} {name}: {detail} [{:.1}s]",
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64()
        );
        self.verdicts.push(Verdict { id, name, pass, detail, elapsed });
    }

    /// Keeps every completed trial for the step-count and decomposition checks.
    fn absorb(&mut self, origin: &'static str, out: &PlanOutput) {
        for s in &out.summaries {
            let completed: Vec<_> = out.entry_records(s.entry).filter(|r| !r.truncated).collect();
            for r in &completed {
                self.decomposition_checked += 1;
                if r.t > r.t_blue + r.t_red + r.t_late + r.t_ok {
                    self.decomposition_violations += 1;
                }
            }
            self.entries.push(EntryStat {
                origin,
                n: s.n,
                mean: s.mean_t,
                stderr: s.stderr_t,
                max_t: completed.iter().map(|r| r.t).max().unwrap_or(0),
            });
        }
    }
}

fn oracle_equivalence(suite: &mut Suite) -> (bool, String) {
    let start = Instant::now();
    let constants = OracleConstants::committed().expect("committed constants parse");
    let cases = [
        (SimParams::new(1, 0.5).unwrap(), 2.0),
        (SimParams::new(2, 0.5).unwrap(), constants.value("k4_default_mean_extinction")),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (i, (params, exact)) in cases.into_iter().enumerate() {
        let params = params.with_step_cap(100_000);
        let out = run_plan(&ExperimentPlan::single(params.clone(), 100_000, 1000 + i as u64), None).unwrap();
        let s = &out.summaries[0];
        let z = (s.mean_t - exact) / s.stderr_t;
        pass &= z.abs() <= 3.0 && s.truncated == 0;
        parts.push(format!("n={} mean {:.4} vs exact {:.4} (z={:+.2})", params.n, s.mean_t, exact, z));
        suite.absorb("oracle equivalence", &out);
    }
    let secs = start.elapsed().as_secs_f64();
    pass &= secs < 10.0;
    parts.push(format!("{secs:.1}s of 10s"));
    (pass, parts.join("; "))
}

fn extinction_band(suite: &mut Suite) -> (bool, String) {
    let config = SweepConfig {
        n_list: vec![1 << 10, 1 << 12, 1 << 14],
        p_list: vec![0.5, 0.1],
        trials: 200,
        seed: 2024,
        w: WFunction::default(),
    };
    let table = asymptotic_sweep(&config, None).unwrap();
    let in_band = table.ratios_within(0.85, 1.3);
    let monotone = table.non_monotone.is_empty();
    let speed = table.max_speed_z() <= 3.0;
    for row in &table.rows {
        suite.entries.push(EntryStat {
            origin: "sweep",
            n: row.n,
            mean: row.mean_t,
            stderr: row.stderr_t,
            max_t: row.max_t,
        });
    }
    let ratios: Vec<String> = table
        .rows
        .iter()
        .map(|r| format!("(n={}, p={}) {:.3}+-{:.3}", r.n, r.p, r.ratio, r.ratio_stderr))
        .collect();
    (
        in_band && monotone && speed,
        format!(
            "{}; band {in_band}, non-increasing {monotone}, speed max |z| {:.2}",
            ratios.join(", "),
            table.max_speed_z()
        ),
    )
}

fn biased_walk_grid() -> (bool, String) {
    let start = Instant::now();
    let mut rng = stream_rng(4, 0);
    let (mut worst_hit, mut worst_time) = (0.0f64, 0.0f64);
    let mut unexplained_equalities = 0;
    let mut boundary = 0;
    let mut violations = 0;
    for i in 0..1000 {
        let k = rng.random_range(1..=20usize);
        let alpha = if i % 10 == 0 { 2.0 / 3.0 } else { rng.random_range(0.01..=2.0 / 3.0) };
        // every fifth spec sits on the boundary: up = alpha, down = up / 2
        let on_boundary = i % 5 == 0;
        let (mut up, mut down) = (Vec::with_capacity(k), Vec::with_capacity(k));
        for _ in 0..k {
            let u: f64 = if on_boundary { alpha } else { rng.random_range(alpha..=1.0) };
            let d_max = (u / 2.0).min(1.0 - u);
            let d = if on_boundary { u / 2.0 } else { rng.random_range(0.0..=d_max) };
            up.push(u);
            down.push(d);
        }
        let spec = BiasedWalkSpec::new(k, alpha, up, down).expect("generated specs are admissible");
        let sol = biased_walk_solve(&spec).unwrap();
        let hit_bound = BiasedWalkSolution::hit_bound(k);
        let time_bound = BiasedWalkSolution::time_bound(alpha);
        worst_hit = worst_hit.max(sol.hit_zero_before_k / hit_bound);
        worst_time = worst_time.max(sol.expected_time_to_k / time_bound);
        if sol.hit_zero_before_k > hit_bound + 1e-12 || sol.expected_time_to_k > time_bound + 1e-9 {
            violations += 1;
        }
        let hit_tight = (sol.hit_zero_before_k - hit_bound).abs() <= 1e-9;
        let time_tight = (sol.expected_time_to_k - time_bound).abs() <= 1e-6 * time_bound;
        // documented equality cases: k = 1 for the hitting bound, the
        // homogeneous up = alpha, down = alpha / 2 walk for the time bound
        if (hit_tight && k != 1) || (time_tight && !on_boundary) {
            unexplained_equalities += 1;
        }
        boundary += (hit_tight || time_tight) as u32;
    }
    let secs = start.elapsed().as_secs_f64();
    (
        violations == 0 && unexplained_equalities == 0 && secs < 5.0,
        format!(
            "1000 specs, {violations} violations, max hit/bound {worst_hit:.4}, max time/bound {worst_time:.6}, \
             {boundary} tight at documented boundaries, {unexplained_equalities} unexplained; {secs:.2}s of 5s"
        ),
    )
}

fn inequality_scan() -> (bool, String) {
    let start = Instant::now();
    let violations = bias_inequality_scan(256, WFunction::default());
    let secs = start.elapsed().as_secs_f64();
    (
        violations.is_empty() && secs < 30.0,
        format!("{} violations up to n = 256; {secs:.2}s of 30s", violations.len()),
    )
}

fn decomposition(suite: &mut Suite) -> (bool, String) {
    let mut plan = ExperimentPlan::new(606);
    for n in [64usize, 256, 1024] {
        for p in [0.5, 0.1] {
            plan = plan
                .with_entry(SimParams::new(n, p).unwrap(), 100)
                .with_entry(SimParams::new(n, p).unwrap().with_init(InitSpec::ClusteredRed), 50)
                .with_entry(SimParams::new(n, p).unwrap().with_init(InitSpec::clustered_blue(n)), 50)
                .with_entry(SimParams::new(n, p).unwrap().with_init(InitSpec::DisjointSites { a: n / 4 }), 50)
                .with_entry(SimParams::new(n, p).unwrap().with_topology(Topology::Bipartite), 50);
        }
    }
    let out = run_plan(&plan, None).unwrap();
    suite.absorb("decomposition", &out);
    let truncated: u64 = out.summaries.iter().map(|s| s.truncated).sum();
    (
        suite.decomposition_violations == 0,
        format!(
            "{} of {} completed trials covered ({} truncated trials excluded from this plan)",
            suite.decomposition_checked - suite.decomposition_violations,
            suite.decomposition_checked,
            truncated
        ),
    )
}

fn failure_frequency(suite: &mut Suite) -> (bool, String) {
    let n = 1 << 10;
    let out = run_plan(&ExperimentPlan::single(SimParams::new(n, 0.5).unwrap(), 10_000, 707), None).unwrap();
    suite.absorb("failure frequency", &out);
    let s = &out.summaries[0];
    let freq = s.failures.total() as f64 / s.trials as f64;
    (
        freq <= 0.01,
        format!(
            "{} failures in {} trials at n = {n} (ii {}, iii {}, iv {}); frequency {freq:.4}",
            s.failures.total(),
            s.trials,
            s.failures.blue_bad,
            s.failures.red_bad_at_level_zero,
            s.failures.timeout
        ),
    )
}

fn knn_identity() -> (bool, String) {
    let mut worst = 0.0f64;
    for i in 1..=20 {
        for j in 1..=20 {
            let spec = AlternatingTrialSpec::new(i as f64 / 20.0, j as f64 / 20.0).unwrap();
            worst = worst.max(alternating_identity_check(&spec, 2000));
        }
    }
    let identity = worst <= 1e-12;

    let mut pass = identity;
    let mut parts = vec![format!("pmf discrepancy {worst:.1e} on 20x20 grid")];
    for arrangement in [Arrangement::Random, Arrangement::Segregated] {
        let config = KnnStationaryConfig { n: 1 << 14, arrangement, trials: 200, seed: 808, coupled_checks: 0 };
        let r = knn_stationary_run(&config, None).unwrap();
        let lower = r.bounds.unwrap().lower;
        let ok = (0.8..=1.2).contains(&r.ratio) && r.t.mean >= lower - 3.0 * r.t.stderr;
        pass &= ok;
        parts.push(format!(
            "{arrangement:?} ratio {:.4}+-{:.4}, mean {:.0} vs lower {:.0}",
            r.ratio, r.ratio_stderr, r.t.mean, lower
        ));
    }
    let mut mismatches = 0;
    for trial in 0..1000 {
        let key = annihilation::rng::TrialKey::new(809, 0, trial);
        let a = coupled_extinction(3, Arrangement::Random, Schedule::Sequential, Coupling::SiteStacks, key);
        let b = coupled_extinction(3, Arrangement::Random, Schedule::RoundRobin, Coupling::SiteStacks, key);
        mismatches += (a != b) as u32;
    }
    pass &= mismatches == 0;
    parts.push(format!("n=3 coupled schedules: {mismatches} of 1000 differ"));
    (pass, parts.join("; "))
}

fn slow_clustered() -> (bool, String) {
    let config = SlowClusteredConfig { n: 1 << 14, p: None, trials: 200, seed: 909 };
    let r = slow_clustered_scenario(&config, None).unwrap();
    let center = 0.75 * r.n as f64;
    let ok_fraction = r.survival_fraction >= 0.99;
    let ok_events = r.min_events as f64 >= center - r.event_tolerance && r.max_events as f64 <= center + r.event_tolerance;
    (
        ok_fraction && ok_events,
        format!(
            "{:.3} of trials alive past 3n ln n; events {:.1}+-{:.1} in [{}, {}] vs 3n/4 = {center:.0} +- {:.0}",
            r.survival_fraction, r.events.mean, r.events.stderr, r.min_events, r.max_events, r.event_tolerance
        ),
    )
}

fn determinism() -> (bool, String) {
    let plan = ExperimentPlan::new(1010)
        .with_entry(SimParams::new(200, 0.5).unwrap(), 40)
        .with_entry(SimParams::new(100, 0.2).unwrap().with_init(InitSpec::DisjointSites { a: 10 }), 30)
        .with_entry(SimParams::new(150, 0.4).unwrap().with_topology(Topology::Bipartite), 30)
        .with_decimate(100);
    let bytes = |workers| {
        let out = run_plan(&plan, Some(workers)).unwrap();
        (out.to_csv().unwrap(), out.to_json().unwrap())
    };
    let reference = bytes(1);
    let plans_ok = [1, 2, 4, 7].into_iter().all(|w| bytes(w) == reference);

    let knn = |w| {
        let c = KnnStationaryConfig { n: 512, arrangement: Arrangement::Random, trials: 40, seed: 1011, coupled_checks: 0 };
        serde_json::to_string(&knn_stationary_run(&c, Some(w)).unwrap()).unwrap()
    };
    let slow = |w| {
        let c = SlowClusteredConfig { n: 1024, p: None, trials: 20, seed: 1012 };
        serde_json::to_string(&slow_clustered_scenario(&c, Some(w)).unwrap()).unwrap()
    };
    let scenarios_ok = knn(1) == knn(3) && slow(1) == slow(5);
    (
        plans_ok && scenarios_ok,
        format!(
            "plan CSV/JSON identical across 1/2/4/7 workers: {plans_ok}; scenario reports identical: {scenarios_ok} \
             ({} CSV bytes)",
            reference.0.len()
        ),
    )
}

fn step_count_bound(suite: &Suite) -> (bool, String) {
    let big: Vec<_> = suite.entries.iter().filter(|e| e.n >= 1 << 10).collect();
    let max_ok = big.iter().all(|e| (e.max_t as f64) < 3.0 * (e.n as f64).powi(2));
    let worst_max = big.iter().map(|e| e.max_t as f64 / (e.n as f64).powi(2)).fold(0.0, f64::max);
    let mean_bad: Vec<String> = suite
        .entries
        .iter()
        .filter(|e| e.mean > 2.0 * (e.n as f64).powi(2) + 3.0 * e.stderr)
        .map(|e| format!("{} n={} mean {:.3}", e.origin, e.n, e.mean))
        .collect();

    // n = 1 is a geometric(1/2) count, so T >= 3 = 3n^2 has probability 1/4
    let trials = 100_000u32;
    let params = SimParams::new(1, 0.5).unwrap().with_step_cap(100_000);
    let out = run_plan(&ExperimentPlan::single(params, trials, 303), None).unwrap();
    let tail = out.records.iter().filter(|r| r.t >= 3).count() as f64 / trials as f64;
    let tail_sd = (0.25 * 0.75 / trials as f64).sqrt();
    let tail_ok = (tail - 0.25).abs() <= 4.0 * tail_sd;

    (
        max_ok && mean_bad.is_empty() && tail_ok,
        format!(
            "{} entries checked; n >= 2^10: max T / n^2 = {worst_max:.3} (< 3); mean T <= 2n^2 within 3 se \
             everywhere: {}; n = 1 tail P(T >= 3) = {tail:.4} vs exact 0.25",
            suite.entries.len(),
            if mean_bad.is_empty() { "yes".to_string() } else { mean_bad.join(", ") },
        ),
    )
}

fn main() {
    let mut suite = Suite::default();

    let t = Instant::now();
    let r = oracle_equivalence(&mut suite);
    suite.record(1, "oracle equivalence", t, r);

    let t = Instant::now();
    let r = extinction_band(&mut suite);
    suite.record(2, "extinction-time band", t, r);

    let t = Instant::now();
    let r = biased_walk_grid();
    suite.record(4, "biased-walk bounds", t, r);

    let t = Instant::now();
    let r = inequality_scan();
    suite.record(5, "bias inequality scan", t, r);

    let t = Instant::now();
    let r = decomposition(&mut suite);
    suite.record(6, "time decomposition", t, r);

    let t = Instant::now();
    let r = failure_frequency(&mut suite);
    suite.record(7, "failure frequency", t, r);

    let t = Instant::now();
    let r = knn_identity();
    suite.record(8, "bipartite identity", t, r);

    let t = Instant::now();
    let r = slow_clustered();
    suite.record(9, "clustered slow regime", t, r);

    let t = Instant::now();
    let r = determinism();
    suite.record(10, "determinism", t, r);

    let t = Instant::now();
    let r = step_count_bound(&suite);
    suite.record(3, "step-count bound", t, r);

    suite.verdicts.sort_by_key(|v| v.id);
    println!();
    println!("acceptance summary");
    for v in &suite.verdicts {
        println!(
            "  {:>2} {:<24} {} ({:.1}s)",
            v.id,
            v.name,
            if v.pass { "PASS" } else { "FAIL" },
            v.elapsed.as_secs_f64()
        );
    }
    let failed: Vec<_> = suite.verdicts.iter().filter(|v| !v.pass).collect();
    if !failed.is_empty() {
        for v in &failed {
            eprintln!("criterion {} failed: {}", v.id, v.detail);
        }
        std::process::exit(1);
    }
}
