//! Batch execution: planning, parallel evaluation and ordered output.

use std::collections::BTreeMap;
use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sparsesum_core::field::divisors;
use sparsesum_core::Field64;

use crate::config::{Suite, SweepConfig};
use crate::error::{HarnessError, Result};
use crate::generate::{bilinear_seeds, subgroup_triples, sum_instances};
use crate::record::{Header, HeaderLine, Instance, ResultRecord, Status, SCHEMA_VERSION};
use crate::suites::{Job, Params};

/// Primes evaluated together; field tables are dropped between batches.
const PRIME_BATCH: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Jsonl,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "jsonl" => Ok(Self::Jsonl),
            "csv" => Ok(Self::Csv),
            other => Err(format!("unknown format {other:?} (expected jsonl|csv)")),
        }
    }
}

/// Jobs for `primes[index]`, in suite order. Sum suites share one job per
/// instance, placed where the first of them appears.
pub fn plan(config: &SweepConfig, primes: &[u64], index: usize) -> Result<Vec<Job>> {
    let p = primes[index];
    let sum_suites: Vec<Suite> = config
        .suites
        .iter()
        .copied()
        .filter(|s| matches!(s, Suite::Identity | Suite::Weil | Suite::Bounds))
        .collect();
    let mut jobs = Vec::new();
    let mut sums_done = false;
    for &suite in &config.suites {
        match suite {
            Suite::Identity | Suite::Weil | Suite::Bounds => {
                if !sums_done {
                    sums_done = true;
                    for instance in sum_instances(config, primes, index)? {
                        jobs.push(Job::Sum {
                            instance,
                            suites: sum_suites.clone(),
                        });
                    }
                }
            }
            Suite::Bilinear => {
                for seed in bilinear_seeds(config, p) {
                    jobs.push(Job::Bilinear { p, seed });
                }
            }
            Suite::Energy => {
                for d in divisors(p - 1) {
                    jobs.push(Job::EnergyGroup { p, d });
                }
                for orders in subgroup_triples(config, p, 0) {
                    jobs.push(Job::EnergyTriple { p, orders });
                }
            }
            Suite::Cauchy => {
                for orders in subgroup_triples(config, p, 1) {
                    jobs.push(Job::Cauchy { p, orders });
                }
            }
            Suite::Ratio => {
                for d in divisors(p - 1) {
                    jobs.push(Job::RatioGroup { p, d });
                }
                jobs.push(Job::RatioTriples { p });
            }
        }
    }
    Ok(jobs)
}

/// Runs every job and hands the records to `sink` in plan order, one batch
/// of primes at a time. Output does not depend on `config.workers`.
pub fn execute(
    config: &SweepConfig,
    mut sink: impl FnMut(&[ResultRecord]) -> Result<()>,
) -> Result<u64> {
    config.validate()?;
    let primes = config.prime_list()?;
    let params = Params::from(config);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| HarnessError::config("workers", e.to_string()))?;
    let mut seq = 0u64;
    for start in (0..primes.len()).step_by(PRIME_BATCH) {
        let indices: Vec<usize> = (start..(start + PRIME_BATCH).min(primes.len())).collect();
        let mut jobs = Vec::new();
        for &i in &indices {
            jobs.extend(plan(config, &primes, i)?);
        }
        let batch: Vec<Vec<ResultRecord>> = pool.install(|| {
            let ctxs: Vec<(u64, Field64)> = indices
                .par_iter()
                .map(|&i| Field64::new(primes[i]).map(|c| (primes[i], c)))
                .collect::<std::result::Result<_, _>>()?;
            let ctx_of = |p: u64| &ctxs.iter().find(|(q, _)| *q == p).expect("planned prime").1;
            Ok::<_, HarnessError>(
                jobs.par_iter()
                    .map(|job| job.run(ctx_of(job.p()), &params))
                    .collect(),
            )
        })?;
        for mut records in batch {
            for r in &mut records {
                r.seq = seq;
                seq += 1;
            }
            sink(&records)?;
        }
    }
    Ok(seq)
}

/// Destination for records.
pub struct RecordWriter {
    inner: WriterKind,
    path: PathBuf,
}

enum WriterKind {
    Jsonl(Box<dyn Write>),
    Csv(Box<csv::Writer<Box<dyn Write>>>),
}

impl RecordWriter {
    /// Writes to `path`, or standard output when `None`. JSONL output starts
    /// with a header line carrying the timestamp.
    pub fn create(path: Option<&Path>, format: Format, seed: u64) -> Result<Self> {
        let label = path.map_or_else(|| PathBuf::from("<stdout>"), Path::to_path_buf);
        let out: Box<dyn Write> = match path {
            Some(p) => Box::new(BufWriter::new(
                File::create(p).map_err(|e| HarnessError::io(p, e))?,
            )),
            None => Box::new(BufWriter::new(io::stdout())),
        };
        let mut writer = Self {
            inner: match format {
                Format::Jsonl => WriterKind::Jsonl(out),
                Format::Csv => WriterKind::Csv(Box::new(csv::Writer::from_writer(out))),
            },
            path: label,
        };
        if let WriterKind::Jsonl(out) = &mut writer.inner {
            let header = HeaderLine {
                header: Header {
                    schema: SCHEMA_VERSION,
                    generated_at: chrono::Utc::now().to_rfc3339(),
                    seed,
                },
            };
            let line = serde_json::to_string(&header).expect("header serializes");
            writeln!(out, "{line}").map_err(|e| HarnessError::io(&writer.path, e))?;
        }
        Ok(writer)
    }

    pub fn write(&mut self, records: &[ResultRecord]) -> Result<()> {
        let path = &self.path;
        match &mut self.inner {
            WriterKind::Jsonl(out) => {
                for r in records {
                    let line = serde_json::to_string(r).expect("records serialize");
                    writeln!(out, "{line}").map_err(|e| HarnessError::io(path, e))?;
                }
                out.flush().map_err(|e| HarnessError::io(path, e))
            }
            WriterKind::Csv(out) => {
                for r in records {
                    out.serialize(r.csv_row()).map_err(|e| csv_error(path, e))?;
                }
                out.flush().map_err(|e| HarnessError::io(path, e))
            }
        }
    }
}

fn csv_error(path: &Path, e: csv::Error) -> HarnessError {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => HarnessError::io(path, io),
        other => HarnessError::io(path, io::Error::other(format!("{other:?}"))),
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct SuiteTally {
    pub pass: u64,
    pub fail: u64,
    pub skipped: u64,
    pub info: u64,
}

/// Aggregate of a run.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Summary {
    pub records: u64,
    pub suites: BTreeMap<String, SuiteTally>,
    /// Largest ratio per quantity among evaluated records.
    pub max_ratio: BTreeMap<String, f64>,
    pub failures: Vec<ResultRecord>,
}

impl Summary {
    pub fn add(&mut self, r: &ResultRecord) {
        self.records += 1;
        let t = self.suites.entry(r.suite.clone()).or_default();
        match r.status {
            Status::Pass => t.pass += 1,
            Status::Fail => t.fail += 1,
            Status::Skipped => t.skipped += 1,
            Status::Info => t.info += 1,
        }
        if let Some(ratio) = r.ratio {
            if matches!(r.status, Status::Pass | Status::Fail) && ratio.is_finite() {
                let m = self.max_ratio.entry(r.quantity.clone()).or_insert(ratio);
                *m = m.max(ratio);
            }
        }
        if r.status == Status::Fail {
            self.failures.push(r.clone());
        }
    }

    pub fn failed(&self) -> u64 {
        self.suites.values().map(|t| t.fail).sum()
    }
}

/// Failures listed in full before the rest are only counted.
const LISTED_FAILURES: usize = 20;

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} records", self.records)?;
        writeln!(
            f,
            "{:<10} {:>8} {:>8} {:>8} {:>8}",
            "suite", "pass", "fail", "skipped", "info"
        )?;
        for (name, t) in &self.suites {
            writeln!(
                f,
                "{:<10} {:>8} {:>8} {:>8} {:>8}",
                name, t.pass, t.fail, t.skipped, t.info
            )?;
        }
        if !self.max_ratio.is_empty() {
            writeln!(f, "max ratios:")?;
            for (q, r) in &self.max_ratio {
                writeln!(f, "  {q:<24} {r:.6}")?;
            }
        }
        if !self.failures.is_empty() {
            writeln!(f, "failures:")?;
            for r in self.failures.iter().take(LISTED_FAILURES) {
                write!(
                    f,
                    "  [{}] {}/{} p={}",
                    r.seq, r.suite, r.quantity, r.instance.p
                )?;
                if let Some(reason) = &r.reason {
                    write!(f, " ({reason})")?;
                }
                writeln!(f, "\n    {}", r.rerun)?;
            }
            if self.failures.len() > LISTED_FAILURES {
                writeln!(f, "  ... {} more", self.failures.len() - LISTED_FAILURES)?;
            }
        }
        Ok(())
    }
}

/// Stored ratio maxima, keyed by the sweep scope they were recorded for.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BaselineFile {
    pub entries: BTreeMap<String, BTreeMap<String, f64>>,
}

/// Relative slack when comparing against stored maxima (float noise only).
const BASELINE_SLACK: f64 = 1e-12;

pub fn baseline_scope(config: &SweepConfig) -> String {
    format!(
        "primes={} lambda_samples={}",
        serde_json::to_string(&config.primes).expect("serializes"),
        config.lambda_samples
    )
}

/// Compares the ratio maxima of this run with the stored ones, recording
/// them first if the scope is new. Returns one record per quantity.
pub fn check_baseline(
    path: &Path,
    scope: &str,
    maxima: &BTreeMap<String, f64>,
) -> Result<Vec<ResultRecord>> {
    let mut file = if path.exists() {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        serde_json::from_str::<BaselineFile>(&text).map_err(|e| {
            HarnessError::config(format!("baseline {}", path.display()), e.to_string())
        })?
    } else {
        BaselineFile::default()
    };
    let rerun = format!(
        "sparsesum verify --config <config with baseline {}>",
        path.display()
    );
    let mut records = Vec::new();
    match file.entries.get(scope) {
        Some(stored) => {
            for (q, &current) in maxima {
                let rec = ResultRecord::new(
                    "ratio",
                    &format!("baseline:{q}"),
                    Instance::default(),
                    rerun.clone(),
                )
                .value(current);
                records.push(match stored.get(q) {
                    Some(&s) => rec
                        .reference(s)
                        .ratio(current / s)
                        .status(Status::check(current <= s * (1.0 + BASELINE_SLACK))),
                    None => rec.status(Status::Info).reason("no stored maximum"),
                });
            }
        }
        None => {
            file.entries.insert(scope.to_string(), maxima.clone());
            let text = serde_json::to_string_pretty(&file).expect("serializes");
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
            }
            std::fs::write(path, text + "\n").map_err(|e| HarnessError::io(path, e))?;
            for (q, &current) in maxima {
                records.push(
                    ResultRecord::new(
                        "ratio",
                        &format!("baseline:{q}"),
                        Instance::default(),
                        rerun.clone(),
                    )
                    .value(current)
                    .status(Status::Info)
                    .reason("baseline recorded"),
                );
            }
        }
    }
    Ok(records)
}

/// Full dataset run; returns the summary. Failing checks do not make this
/// an error.
pub fn run_sweep(config: &SweepConfig, out: Option<&Path>, format: Format) -> Result<Summary> {
    config.validate()?;
    let mut writer = RecordWriter::create(out, format, config.seed)?;
    let mut summary = Summary::default();
    execute(config, |records| {
        records.iter().for_each(|r| summary.add(r));
        writer.write(records)
    })?;
    Ok(summary)
}

/// Verification run: like [`run_sweep`], plus the ratio baseline check when
/// configured. The run passes iff the summary has no failures.
pub fn run_verify(config: &SweepConfig, out: Option<&Path>, format: Format) -> Result<Summary> {
    config.validate()?;
    let mut writer = RecordWriter::create(out, format, config.seed)?;
    let mut summary = Summary::default();
    let seq = execute(config, |records| {
        records.iter().for_each(|r| summary.add(r));
        writer.write(records)
    })?;
    if let (Some(path), true) = (&config.baseline, config.suites.contains(&Suite::Ratio)) {
        let maxima: BTreeMap<String, f64> = summary
            .max_ratio
            .iter()
            .filter(|(q, _)| q.ends_with("_ratio") && !q.starts_with("j_"))
            .map(|(q, &r)| (q.clone(), r))
            .collect();
        let mut records = check_baseline(path, &baseline_scope(config), &maxima)?;
        for (i, r) in records.iter_mut().enumerate() {
            r.seq = seq + i as u64;
            summary.add(r);
        }
        writer.write(&records)?;
    }
    Ok(summary)
}

/// Records of a run, in memory; for tests and small sweeps.
pub fn collect(config: &SweepConfig) -> Result<Vec<ResultRecord>> {
    let mut all = Vec::new();
    execute(config, |records| {
        all.extend_from_slice(records);
        Ok(())
    })?;
    Ok(all)
}
