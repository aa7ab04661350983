use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::stats::{leading_order, Moments};
use crate::error::{Error, Result};
use crate::instrumentation::{ProofMonitor, SeriesPoint, SeriesRecorder, TraceStats, WFunction};
use crate::process::{run_to_extinction, SimParams, StepObserver};
use crate::rng::TrialKey;

/// Environment variable read for the worker count when none is given.
pub const WORKERS_ENV: &str = "ANNIHILATION_WORKERS";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlanEntry {
    pub params: SimParams,
    pub trials: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentPlan {
    pub master_seed: u64,
    pub entries: Vec<PlanEntry>,
    #[serde(default)]
    pub w: WFunction,
    /// Record `(t, M, R, B)` every this many steps; `None` records nothing.
    #[serde(default)]
    pub decimate: Option<u64>,
}

impl ExperimentPlan {
    pub fn new(master_seed: u64) -> Self {
        Self { master_seed, entries: Vec::new(), w: WFunction::default(), decimate: None }
    }

    pub fn single(params: SimParams, trials: u32, master_seed: u64) -> Self {
        Self::new(master_seed).with_entry(params, trials)
    }

    pub fn with_entry(mut self, params: SimParams, trials: u32) -> Self {
        self.entries.push(PlanEntry { params, trials });
        self
    }

    pub fn with_w(mut self, w: WFunction) -> Self {
        self.w = w;
        self
    }

    pub fn with_decimate(mut self, every: u64) -> Self {
        self.decimate = Some(every);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.entries.is_empty() {
            return Err(Error::InvalidParams("plan has no entries".into()));
        }
        if self.entries.len() > u32::MAX as usize {
            return Err(Error::InvalidParams("too many plan entries".into()));
        }
        for (i, e) in self.entries.iter().enumerate() {
            if e.trials == 0 {
                return Err(Error::InvalidParams(format!("entry {i} has no trials")));
            }
            e.params.validate()?;
        }
        Ok(())
    }

    /// SHA-256 of the plan's canonical JSON.
    pub fn hash(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("plans always serialize");
        hex::encode(Sha256::digest(bytes))
    }

    pub fn total_trials(&self) -> u64 {
        self.entries.iter().map(|e| e.trials as u64).sum()
    }
}

/// One CSV row.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub entry: u32,
    pub trial: u32,
    pub n: usize,
    pub p: f64,
    pub init_variant: String,
    pub seed: u64,
    #[serde(rename = "T")]
    pub t: u64,
    #[serde(rename = "T_blue")]
    pub t_blue: u64,
    #[serde(rename = "T_red")]
    pub t_red: u64,
    #[serde(rename = "T_late")]
    pub t_late: u64,
    #[serde(rename = "T_ok")]
    pub t_ok: u64,
    pub tau_outcome: String,
    #[serde(rename = "C")]
    pub c: u64,
    #[serde(rename = "Xi")]
    pub xi: u64,
    #[serde(rename = "A")]
    pub a: usize,
    #[serde(rename = "L")]
    pub l: Option<usize>,
    pub truncated: bool,
}

impl TrialRecord {
    fn new(key: TrialKey, params: &SimParams, stats: &TraceStats) -> Self {
        let d = stats.decomposition.as_ref().expect("plan trials carry a proof monitor");
        Self {
            entry: key.entry,
            trial: key.trial,
            n: params.n,
            p: params.p,
            init_variant: params.init.variant_name(),
            seed: key.seed,
            t: stats.t,
            t_blue: d.t_blue,
            t_red: d.t_red,
            t_late: d.t_late,
            t_ok: d.t_ok,
            tau_outcome: d.tau_outcome.label().into(),
            c: stats.collisions,
            xi: stats.bad_moves,
            a: stats.a,
            l: stats.l(),
            truncated: stats.truncated,
        }
    }

    pub fn key(&self) -> TrialKey {
        TrialKey::new(self.seed, self.entry, self.trial)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FailureCounts {
    pub blue_bad: u64,
    pub red_bad_at_level_zero: u64,
    pub timeout: u64,
}

impl FailureCounts {
    pub fn total(&self) -> u64 {
        self.blue_bad + self.red_bad_at_level_zero + self.timeout
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSummary {
    pub entry: u32,
    pub n: usize,
    pub p: f64,
    pub init_variant: String,
    pub trials: u64,
    pub mean_t: f64,
    pub stderr_t: f64,
    pub min_t: u64,
    pub max_t: u64,
    /// `mean T / (2 n ln n)`.
    pub ratio: f64,
    pub ratio_stderr: f64,
    pub mean_t_blue: f64,
    pub mean_t_red: f64,
    pub mean_t_late: f64,
    pub mean_t_ok: f64,
    pub failures: FailureCounts,
    pub not_reached: u64,
    pub mean_c: f64,
    pub mean_xi: f64,
    /// Over trials in which the red level ever rose.
    pub mean_l: Option<f64>,
    pub l_defined: u64,
    pub truncated: u64,
}

impl ExperimentSummary {
    /// Summarizes the records of one entry, in the order given.
    pub fn from_records(entry: u32, params: &SimParams, records: &[TrialRecord]) -> Self {
        let t: Moments = records.iter().map(|r| r.t as f64).collect();
        let mean_of = |f: fn(&TrialRecord) -> u64| records.iter().map(|r| f(r) as f64).collect::<Moments>().mean();
        let l: Moments = records.iter().filter_map(|r| r.l.map(|l| l as f64)).collect();
        let mut failures = FailureCounts::default();
        let mut not_reached = 0;
        for r in records {
            match r.tau_outcome.as_str() {
                "failure_ii" => failures.blue_bad += 1,
                "failure_iii" => failures.red_bad_at_level_zero += 1,
                "failure_iv" => failures.timeout += 1,
                "not_reached" => not_reached += 1,
                _ => {}
            }
        }
        let scale = 1.0 / leading_order(params.n);
        Self {
            entry,
            n: params.n,
            p: params.p,
            init_variant: params.init.variant_name(),
            trials: records.len() as u64,
            mean_t: t.mean(),
            stderr_t: t.stderr(),
            min_t: records.iter().map(|r| r.t).min().unwrap_or(0),
            max_t: records.iter().map(|r| r.t).max().unwrap_or(0),
            ratio: t.mean() * scale,
            ratio_stderr: t.stderr() * scale,
            mean_t_blue: mean_of(|r| r.t_blue),
            mean_t_red: mean_of(|r| r.t_red),
            mean_t_late: mean_of(|r| r.t_late),
            mean_t_ok: mean_of(|r| r.t_ok),
            failures,
            not_reached,
            mean_c: mean_of(|r| r.c),
            mean_xi: mean_of(|r| r.xi),
            mean_l: (l.count() > 0).then(|| l.mean()),
            l_defined: l.count(),
            truncated: records.iter().filter(|r| r.truncated).count() as u64,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub master_seed: u64,
    pub plan_hash: String,
    pub entries: usize,
    pub total_trials: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PlanOutput {
    pub manifest: Manifest,
    pub summaries: Vec<ExperimentSummary>,
    pub records: Vec<TrialRecord>,
    /// Parallel to `records`; empty vectors when no decimation was asked for.
    pub series: Vec<Vec<SeriesPoint>>,
}

#[derive(Serialize)]
struct JsonTrial<'a> {
    #[serde(flatten)]
    record: &'a TrialRecord,
    #[serde(skip_serializing_if = "<[SeriesPoint]>::is_empty")]
    series: &'a [SeriesPoint],
}

#[derive(Serialize)]
struct JsonDocument<'a> {
    manifest: &'a Manifest,
    summaries: &'a [ExperimentSummary],
    trials: Vec<JsonTrial<'a>>,
}

impl PlanOutput {
    pub fn summary(&self, entry: usize) -> &ExperimentSummary {
        &self.summaries[entry]
    }

    pub fn entry_records(&self, entry: u32) -> impl Iterator<Item = &TrialRecord> {
        self.records.iter().filter(move |r| r.entry == entry)
    }

    pub fn to_json(&self) -> Result<String> {
        let doc = JsonDocument {
            manifest: &self.manifest,
            summaries: &self.summaries,
            trials: self
                .records
                .iter()
                .zip(&self.series)
                .map(|(record, series)| JsonTrial { record, series })
                .collect(),
        };
        let mut text = serde_json::to_string_pretty(&doc)?;
        text.push('\n');
        Ok(text)
    }

    /// Streams CSV rows into `out`, returning how many were written when
    /// an error interrupts.
    pub fn write_csv<W: Write>(&self, out: W) -> std::result::Result<(), (usize, csv::Error)> {
        let mut w = csv::Writer::from_writer(out);
        for (i, r) in self.records.iter().enumerate() {
            w.serialize(r).map_err(|e| (i, e))?;
        }
        w.flush().map_err(|e| (self.records.len(), e.into()))
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).map_err(|(_, e)| Error::Csv(e))?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }

    /// Writes the records to `path`. On an I/O failure the error reports
    /// how many records reached the file.
    pub fn write(&self, path: &Path, format: OutputFormat) -> Result<()> {
        let output_err = |records_written, source| Error::Output { path: path.to_owned(), records_written, source };
        let file = File::create(path).map_err(|e| output_err(0, e))?;
        let mut out = BufWriter::new(file);
        match format {
            OutputFormat::Csv => self.write_csv(&mut out).map_err(|(written, e)| {
                if !e.is_io_error() {
                    return Error::Csv(e);
                }
                match e.into_kind() {
                    csv::ErrorKind::Io(io) => output_err(written, io),
                    _ => unreachable!("checked to be an I/O error"),
                }
            })?,
            OutputFormat::Json => out.write_all(self.to_json()?.as_bytes()).map_err(|e| output_err(0, e))?,
        }
        out.flush().map_err(|e| output_err(self.records.len(), e))
    }
}

/// Worker count: `requested`, else the environment variable, else rayon's
/// default.
pub fn worker_count(requested: Option<usize>) -> usize {
    requested
        .or_else(|| std::env::var(WORKERS_ENV).ok().and_then(|v| v.parse().ok()))
        .filter(|&w| w > 0)
        .unwrap_or_else(rayon::current_num_threads)
}

/// Maps `f` over `items` on a pool of `workers` threads, keeping input order.
pub(crate) fn ordered_map<T, U, F>(items: Vec<T>, workers: Option<usize>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Send + Sync,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(worker_count(workers))
        .build()
        .expect("thread pool");
    pool.install(|| items.into_par_iter().map(f).collect())
}

/// Runs one trial with the proof monitor (and a series recorder when
/// `decimate` is set). Re-running with the same key reproduces it exactly.
pub fn run_trial(params: &SimParams, key: TrialKey, w: WFunction, decimate: Option<u64>) -> Result<TraceStats> {
    let mut monitor = ProofMonitor::new(params.n, w);
    let mut rng = key.rng();
    match decimate {
        Some(every) => {
            let mut series = SeriesRecorder::new(every);
            let observers: &mut [&mut dyn StepObserver] = &mut [&mut monitor, &mut series];
            run_to_extinction(params, &mut rng, observers)
        }
        None => run_to_extinction(params, &mut rng, &mut [&mut monitor]),
    }
}

/// Runs every trial of the plan and aggregates per entry. The result is a
/// function of the plan alone.
pub fn run_plan(plan: &ExperimentPlan, workers: Option<usize>) -> Result<PlanOutput> {
    plan.validate()?;
    let keys: Vec<TrialKey> = plan
        .entries
        .iter()
        .enumerate()
        .flat_map(|(e, entry)| (0..entry.trials).map(move |t| TrialKey::new(plan.master_seed, e as u32, t)))
        .collect();
    let results = ordered_map(keys, workers, |key| {
        let params = &plan.entries[key.entry as usize].params;
        run_trial(params, key, plan.w, plan.decimate).map(|stats| (key, stats))
    });

    let mut records = Vec::with_capacity(results.len());
    let mut series = Vec::with_capacity(results.len());
    for r in results {
        let (key, mut stats) = r?;
        records.push(TrialRecord::new(key, &plan.entries[key.entry as usize].params, &stats));
        series.push(std::mem::take(&mut stats.series));
    }
    let mut summaries = Vec::with_capacity(plan.entries.len());
    let mut start = 0;
    for (e, entry) in plan.entries.iter().enumerate() {
        let end = start + entry.trials as usize;
        summaries.push(ExperimentSummary::from_records(e as u32, &entry.params, &records[start..end]));
        start = end;
    }
    Ok(PlanOutput {
        manifest: Manifest {
            tool: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            master_seed: plan.master_seed,
            plan_hash: plan.hash(),
            entries: plan.entries.len(),
            total_trials: plan.total_trials(),
        },
        summaries,
        records,
        series,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::process::InitSpec;

    fn small_plan() -> ExperimentPlan {
        ExperimentPlan::new(11)
            .with_entry(SimParams::new(16, 0.5).unwrap(), 20)
            .with_entry(SimParams::new(8, 0.2).unwrap().with_init(InitSpec::ClusteredRed), 10)
    }

    #[test]
    fn rejects_empty_entries() {
        let plan = ExperimentPlan::single(SimParams::new(4, 0.5).unwrap(), 0, 1);
        assert!(run_plan(&plan, Some(1)).is_err());
        assert!(run_plan(&ExperimentPlan::new(1), Some(1)).is_err());
    }

    #[test]
    fn records_are_ordered_and_rerunnable() {
        let plan = small_plan();
        let out = run_plan(&plan, Some(3)).unwrap();
        assert_eq!(out.records.len(), 30);
        let keys: Vec<_> = out.records.iter().map(|r| (r.entry, r.trial)).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        let r = &out.records[23];
        let params = &plan.entries[r.entry as usize].params;
        let again = run_trial(params, r.key(), plan.w, None).unwrap();
        assert_eq!(TrialRecord::new(r.key(), params, &again), *r);
    }

    #[test]
    fn summary_matches_record_means() {
        let out = run_plan(&small_plan(), Some(2)).unwrap();
        let csv = out.to_csv().unwrap();
        let back: Vec<TrialRecord> = csv::Reader::from_reader(csv.as_bytes())
            .deserialize()
            .collect::<std::result::Result<_, _>>()
            .unwrap();
        assert_eq!(back, out.records);
        for s in &out.summaries {
            let ts: Vec<f64> = back.iter().filter(|r| r.entry == s.entry).map(|r| r.t as f64).collect();
            let mean = ts.iter().sum::<f64>() / ts.len() as f64;
            assert!((mean - s.mean_t).abs() < 1e-9 * mean);
            assert!(s.failures.total() + s.not_reached <= s.trials);
        }
    }

    #[test]
    fn hash_tracks_content() {
        let a = small_plan();
        let mut b = small_plan();
        assert_eq!(a.hash(), b.hash());
        b.master_seed += 1;
        assert_ne!(a.hash(), b.hash());
    }

    #[test]
    fn series_only_when_requested() {
        let plain = run_plan(&small_plan(), Some(1)).unwrap();
        assert!(plain.series.iter().all(Vec::is_empty));
        assert!(!plain.to_json().unwrap().contains("\"series\""));
        let with = run_plan(&small_plan().with_decimate(5), Some(1)).unwrap();
        assert!(with.series.iter().all(|s| !s.is_empty()));
    }
}
