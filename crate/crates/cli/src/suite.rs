//! Parallel execution of the battery with ordered report assembly.

use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::battery::{battery, Job, Scale};
use crate::report::{Report, SCHEMA_VERSION};
use crate::{CliError, Format};

pub const THREADS_ENV: &str = "FOCKFORGE_THREADS";

/// Thread cap from FOCKFORGE_THREADS. Unset, empty, or 0 means no cap.
pub fn threads_from_env() -> Result<Option<usize>, CliError> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(s) if s.trim().is_empty() => Ok(None),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(0) => Ok(None),
            Ok(n) => Ok(Some(n)),
            Err(_) => Err(CliError::Schema(format!("{THREADS_ENV} must be a non-negative integer, got {s:?}"))),
        },
    }
}

pub struct JobOutcome {
    pub criterion: u8,
    pub id: String,
    pub result: Result<Report, CliError>,
    pub seconds: f64,
}

/// Runs `jobs` on at most `threads` workers. Outcomes keep the job order.
pub fn run_jobs(jobs: &[Job], seed: u64, threads: Option<usize>) -> Result<Vec<JobOutcome>, CliError> {
    let run = |job: &Job| {
        let start = Instant::now();
        let result = job.run(seed).map_err(CliError::from_core_internal);
        JobOutcome {
            criterion: job.criterion,
            id: job.id.clone(),
            result,
            seconds: start.elapsed().as_secs_f64(),
        }
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::Numerical(format!("thread pool: {e}")))?;
    Ok(pool.install(|| jobs.par_iter().map(run).collect()))
}

#[derive(Serialize)]
struct SummaryEntry<'a> {
    id: &'a str,
    criterion: u8,
    pass: bool,
    file: String,
}

#[derive(Serialize)]
struct Summary<'a> {
    schema_version: u32,
    suite: &'a str,
    seed: u64,
    pass: bool,
    reports: Vec<SummaryEntry<'a>>,
}

/// Serialized reports in job order: (file name, bytes). Errors abort.
pub fn render(outcomes: &[JobOutcome], scale: Scale, seed: u64, format: Format) -> Result<Vec<(String, String)>, CliError> {
    let mut files = Vec::new();
    let mut entries = Vec::new();
    let mut all_pass = true;
    for o in outcomes {
        let report = o.result.as_ref().map_err(|e| e.clone())?;
        let ext = format.extension();
        let file = format!("{}.{ext}", o.id);
        let body = match format {
            Format::Json => report.to_json(),
            Format::Csv => report.to_csv(),
        };
        files.push((file.clone(), body));
        all_pass &= report.pass;
        entries.push(SummaryEntry {
            id: &o.id,
            criterion: o.criterion,
            pass: report.pass,
            file,
        });
    }
    let summary = Summary {
        schema_version: SCHEMA_VERSION,
        suite: scale.name(),
        seed,
        pass: all_pass,
        reports: entries,
    };
    let mut body = serde_json::to_string_pretty(&summary).expect("summary serializes");
    body.push('\n');
    files.push(("summary.json".into(), body));
    Ok(files)
}

/// Runs a named suite and writes one report per job plus summary.json into `out_dir`.
/// Returns the exit code.
pub fn run_suite(name: &str, out_dir: &Path, seed: u64, format: Format) -> Result<i32, CliError> {
    let scale = Scale::parse(name)
        .ok_or_else(|| CliError::Schema(format!("unknown suite {name:?} (expected smoke or full)")))?;
    let threads = threads_from_env()?;
    let jobs = battery(scale);
    let start = Instant::now();
    let outcomes = run_jobs(&jobs, seed, threads)?;
    for o in &outcomes {
        let status = match &o.result {
            Ok(r) if r.pass => "pass".to_string(),
            Ok(r) => format!(
                "FAIL ({})",
                r.failed_checks().iter().map(|c| c.name.as_str()).collect::<Vec<_>>().join(", ")
            ),
            Err(e) => format!("ERROR ({e})"),
        };
        eprintln!("{:<32} {:>8.3}s  {status}", o.id, o.seconds);
    }
    eprintln!("suite {name}: {} reports in {:.2}s", outcomes.len(), start.elapsed().as_secs_f64());

    let files = render(&outcomes, scale, seed, format)?;
    std::fs::create_dir_all(out_dir).map_err(|e| CliError::Io(format!("{}: {e}", out_dir.display())))?;
    for (file, body) in &files {
        let path = out_dir.join(file);
        std::fs::write(&path, body).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    }
    let pass = outcomes.iter().all(|o| matches!(&o.result, Ok(r) if r.pass));
    Ok(if pass { 0 } else { 1 })
}
