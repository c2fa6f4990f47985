//! Benchmark harness: runs a suite manifest problem by problem, re-validates
//! every claimed solution, and prints a coverage table where the bracketed
//! number counts problems proven to have no strong solution.

use std::collections::BTreeMap;
use std::panic::AssertUnwindSafe;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};

use fondkit::determinize::compile;
use fondkit::solver::{solve, SolveOutcome, SolveTrace};
use fondkit::validate::{classify, PolicyClass};

use crate::{load_task, parse_ordering, PlannerSettings};

#[derive(Debug, Deserialize)]
pub struct SuiteManifest {
    pub problems: Vec<SuiteEntry>,
}

#[derive(Debug, Deserialize)]
pub struct SuiteEntry {
    pub domain_file: PathBuf,
    pub problem_file: PathBuf,
    pub name: Option<String>,
    /// Domain label for the summary table; defaults to the domain file stem.
    pub group: Option<String>,
    /// Per-domain ordering override (`desc` or `asc`).
    pub ordering: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RunStatus {
    Solved,
    ProvenNoSolution,
    BudgetExhausted,
    Failure,
}

#[derive(Debug, Serialize)]
pub struct RunConfigSummary {
    pub ordering: String,
    pub cap: usize,
    pub ndp2: bool,
    pub strategies: Vec<String>,
    pub budget_secs: f64,
}

#[derive(Debug, Serialize)]
pub struct RunRecord {
    pub domain: String,
    pub problem: String,
    pub status: RunStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub policy_size: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<SolveTrace>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub config: RunConfigSummary,
    pub wall_ms: u64,
}

pub struct BenchReport {
    pub records: Vec<RunRecord>,
    pub summary: String,
}

fn config_summary(settings: &PlannerSettings) -> RunConfigSummary {
    RunConfigSummary {
        ordering: match settings.ordering {
            fondkit::determinize::EffectOrdering::Descending => "desc".into(),
            fondkit::determinize::EffectOrdering::Ascending => "asc".into(),
        },
        cap: settings.cap,
        ndp2: settings.ndp2,
        strategies: settings.strategy_names(),
        budget_secs: settings.budget.wall.as_secs_f64(),
    }
}

fn run_one(domain_file: &Path, problem_file: &Path, settings: &PlannerSettings) -> RunRecord {
    let stem = |p: &Path| p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let blank = || RunRecord {
        domain: stem(domain_file),
        problem: stem(problem_file),
        status: RunStatus::Failure,
        policy_size: None,
        trace: None,
        error: None,
        config: config_summary(settings),
        wall_ms: 0,
    };

    let started = Instant::now();
    let result = std::panic::catch_unwind(AssertUnwindSafe(|| -> Result<RunRecord> {
        let mut record = blank();
        let task = load_task(domain_file, problem_file)?;
        let delta = compile(task.clone(), settings.determinize_options())?;
        let (outcome, trace) = solve(&delta, &settings.solve_config());
        record.trace = Some(trace);
        match outcome {
            SolveOutcome::Solved(policy) => {
                let verdict = classify(&policy, &task);
                match verdict.class {
                    PolicyClass::StrongCyclic | PolicyClass::StrongAcyclic => {
                        record.status = RunStatus::Solved;
                        record.policy_size = Some(policy.len());
                    }
                    other => {
                        record.error = Some(format!("returned policy failed validation: {other:?}"));
                    }
                }
            }
            SolveOutcome::NoSolution => record.status = RunStatus::ProvenNoSolution,
            SolveOutcome::BudgetExhausted => record.status = RunStatus::BudgetExhausted,
        }
        Ok(record)
    }));
    let mut record = match result {
        Ok(Ok(done)) => done,
        Ok(Err(err)) => {
            let mut r = blank();
            r.error = Some(format!("{err:#}"));
            r
        }
        Err(panic) => {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".to_string());
            let mut r = blank();
            r.error = Some(format!("panicked: {msg}"));
            r
        }
    };
    record.wall_ms = started.elapsed().as_millis() as u64;
    record
}

/// Runs every problem in the manifest with per-problem isolation; paths in
/// the manifest resolve relative to the manifest file.
pub fn run_suite(manifest_path: &Path, settings: &PlannerSettings) -> Result<BenchReport> {
    let text = std::fs::read_to_string(manifest_path)
        .with_context(|| format!("reading {}", manifest_path.display()))?;
    let manifest: SuiteManifest =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", manifest_path.display()))?;
    let base = manifest_path.parent().unwrap_or(Path::new("."));

    let mut records = Vec::with_capacity(manifest.problems.len());
    for entry in &manifest.problems {
        let mut entry_settings = settings.clone();
        if let Some(ordering) = &entry.ordering {
            entry_settings.ordering = parse_ordering(ordering)?;
        }
        let domain_file = base.join(&entry.domain_file);
        let problem_file = base.join(&entry.problem_file);
        let mut record = run_one(&domain_file, &problem_file, &entry_settings);
        if let Some(group) = &entry.group {
            record.domain = group.clone();
        }
        if let Some(name) = &entry.name {
            record.problem = name.clone();
        }
        records.push(record);
    }
    let summary = summarize(&records);
    Ok(BenchReport { records, summary })
}

/// Coverage table: `solved (proven-no-solution)` per domain and in total,
/// plus exhausted/failed tallies when present.
pub fn summarize(records: &[RunRecord]) -> String {
    struct Row {
        solved: usize,
        no_solution: usize,
        exhausted: usize,
        failed: usize,
        total: usize,
    }
    let mut rows: BTreeMap<&str, Row> = BTreeMap::new();
    for r in records {
        let row = rows.entry(r.domain.as_str()).or_insert(Row {
            solved: 0,
            no_solution: 0,
            exhausted: 0,
            failed: 0,
            total: 0,
        });
        row.total += 1;
        match r.status {
            RunStatus::Solved => row.solved += 1,
            RunStatus::ProvenNoSolution => row.no_solution += 1,
            RunStatus::BudgetExhausted => row.exhausted += 1,
            RunStatus::Failure => row.failed += 1,
        }
    }
    let width = rows.keys().map(|d| d.len()).max().unwrap_or(6).max(6);
    let mut out = String::new();
    out.push_str(&format!(
        "{:<width$}  {:>10}  {:>9}  {:>6}\n",
        "domain", "solved", "exhausted", "failed"
    ));
    let mut solved = 0;
    let mut no_solution = 0;
    let mut exhausted = 0;
    let mut failed = 0;
    let mut total = 0;
    for (domain, row) in &rows {
        out.push_str(&format!(
            "{:<width$}  {:>6} ({})  {:>9}  {:>6}\n",
            domain, row.solved, row.no_solution, row.exhausted, row.failed
        ));
        solved += row.solved;
        no_solution += row.no_solution;
        exhausted += row.exhausted;
        failed += row.failed;
        total += row.total;
    }
    out.push_str(&format!(
        "{:<width$}  {:>6} ({})  {:>9}  {:>6}   [{} problems]\n",
        "total", solved, no_solution, exhausted, failed, total
    ));
    out
}

/// Cumulative `(time, solved)` pairs for cactus plots: one row per solved
/// problem, ordered by its individual solve time.
pub fn cactus_csv(records: &[RunRecord]) -> String {
    let mut times: Vec<u64> = records
        .iter()
        .filter(|r| r.status == RunStatus::Solved)
        .map(|r| r.wall_ms)
        .collect();
    times.sort_unstable();
    let mut out = String::from("time_secs,solved\n");
    for (i, ms) in times.iter().enumerate() {
        out.push_str(&format!("{:.3},{}\n", *ms as f64 / 1000.0, i + 1));
    }
    out
}
