use annihilation::experiments::{
    coupled_extinction, run_plan, Arrangement, Coupling, ExperimentPlan, OutputFormat, Schedule,
};
use annihilation::instrumentation::WFunction;
use annihilation::process::{InitSpec, SimParams, Topology};
use annihilation::rng::TrialKey;

#[test]
fn per_blue_streams_depend_on_the_schedule() {
    let differing = (0..500)
        .filter(|&trial| {
            let key = TrialKey::new(17, 0, trial);
            let a = coupled_extinction(3, Arrangement::Random, Schedule::Sequential, Coupling::BlueStreams, key);
            let b = coupled_extinction(3, Arrangement::Random, Schedule::RoundRobin, Coupling::BlueStreams, key);
            a != b
        })
        .count();
    assert!(differing > 0);
}

#[test]
fn site_stacks_agree_at_n3() {
    for trial in 0..500 {
        let key = TrialKey::new(17, 0, trial);
        for arrangement in [Arrangement::Random, Arrangement::Segregated] {
            let a = coupled_extinction(3, arrangement, Schedule::Sequential, Coupling::SiteStacks, key);
            let b = coupled_extinction(3, arrangement, Schedule::RoundRobin, Coupling::SiteStacks, key);
            let c = coupled_extinction(3, arrangement, Schedule::Reversed, Coupling::SiteStacks, key);
            assert_eq!((a, a), (b, c), "trial {trial}");
        }
    }
}

fn mixed_plan(seed: u64) -> ExperimentPlan {
    ExperimentPlan::new(seed)
        .with_entry(SimParams::new(64, 0.5).unwrap(), 40)
        .with_entry(SimParams::new(32, 0.1).unwrap().with_init(InitSpec::DisjointSites { a: 5 }), 30)
        .with_entry(SimParams::new(48, 0.3).unwrap().with_topology(Topology::Bipartite), 30)
        .with_decimate(25)
}

#[test]
fn outputs_are_byte_identical_across_worker_counts() {
    let dir = tempfile::tempdir().unwrap();
    let mut files = Vec::new();
    for workers in [1, 3, 8] {
        let out = run_plan(&mixed_plan(99), Some(workers)).unwrap();
        for (ext, format) in [("csv", OutputFormat::Csv), ("json", OutputFormat::Json)] {
            let path = dir.path().join(format!("w{workers}.{ext}"));
            out.write(&path, format).unwrap();
            files.push((ext, std::fs::read(&path).unwrap()));
        }
    }
    for ext in ["csv", "json"] {
        let same: Vec<_> = files.iter().filter(|(e, _)| *e == ext).map(|(_, b)| b).collect();
        assert!(same.windows(2).all(|w| w[0] == w[1]), "{ext} differs");
    }
    let other = run_plan(&mixed_plan(100), Some(2)).unwrap().to_csv().unwrap();
    assert_ne!(other.as_bytes(), &files[0].1[..]);
}

#[test]
fn unwritable_output_is_reported() {
    let out = run_plan(&ExperimentPlan::single(SimParams::new(8, 0.5).unwrap(), 2, 0), Some(1)).unwrap();
    let err = out.write(std::path::Path::new("/nonexistent-dir/x.csv"), OutputFormat::Csv).unwrap_err();
    assert!(matches!(err, annihilation::Error::Output { records_written: 0, .. }), "{err}");
}

#[test]
fn blue_phase_is_short_from_a_single_blue_site() {
    // every blue starts on one vertex, the slowest start for the blue phase
    let n = 1024;
    for p in [0.5, 0.1] {
        let params = SimParams::new(n, p).unwrap().with_init(InitSpec::clustered_blue(n));
        let out = run_plan(&ExperimentPlan::single(params, 20, 7).with_w(WFunction::default()), None).unwrap();
        let s = &out.summaries[0];
        let bound = 6.0 * n as f64 / 7.0;
        assert!(s.mean_t_blue > 0.0);
        assert!(s.mean_t_blue <= bound, "p = {p}: mean T_blue {} > {bound}", s.mean_t_blue);
    }
}
