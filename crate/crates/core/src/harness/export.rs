//! Trace and summary persistence.
//!
//! Summaries append to `summary.csv` (fixed header) or `summary.jsonl`; a run
//! never rewrites earlier rows. Traces are pretty-printed JSON, one file per
//! run, and contain no timestamps so seeded runs export byte-identically.

use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{Experiment, OutputFormat, RunOutcome};
use crate::engine::{ConvergenceIndex, Trace};
use crate::error::HarnessError;

pub const SUMMARY_HEADER: &str = "graph,protocol,daemon,seed,init_hash,conv_me,conv_au,violations,steps,reason";

/// One line of the run summary.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub graph: String,
    pub protocol: String,
    pub daemon: String,
    pub seed: u64,
    /// FNV-1a of the initial configuration in its text form.
    pub init_hash: String,
    /// ME convergence index; a lower bound when `reason` is `undetermined`.
    pub conv_me: usize,
    /// First index from which every configuration is legitimate.
    pub conv_au: usize,
    /// Configurations with several privileged vertices from `conv_au` on.
    pub violations: usize,
    pub steps: usize,
    /// `converged`, `max_steps`, `terminal` or `undetermined`.
    pub reason: String,
}

/// 64-bit FNV-1a, as 16 hex digits.
pub fn fnv1a(bytes: &[u8]) -> String {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    format!("{h:016x}")
}

#[derive(Serialize)]
struct TraceMeta<'a> {
    graph: String,
    n: usize,
    diam: usize,
    protocol: String,
    domain: [i64; 2],
    daemon: String,
    seed: u64,
    run_seed: u64,
    max_steps: usize,
    init: &'a [i64],
}

#[derive(Serialize)]
struct TraceSummary<'a> {
    conv_me: ConvergenceIndex,
    conv_au: ConvergenceIndex,
    row: &'a SummaryRow,
}

#[derive(Serialize)]
struct TraceExport<'a> {
    meta: TraceMeta<'a>,
    summary: TraceSummary<'a>,
    trace: &'a Trace,
}

/// Serializes a run to pretty JSON.
pub fn trace_json(exp: &Experiment, outcome: &RunOutcome) -> Result<String, HarnessError> {
    let g = exp.protocol.graph();
    let domain = exp.protocol.domain();
    let export = TraceExport {
        meta: TraceMeta {
            graph: exp.graph_label(),
            n: g.n(),
            diam: g.diam(),
            protocol: exp.spec.protocol.to_string(),
            domain: [*domain.start(), *domain.end()],
            daemon: exp.daemon_label(),
            seed: exp.spec.seed,
            run_seed: outcome.run_seed,
            max_steps: exp.max_steps(),
            init: outcome.init.states(),
        },
        summary: TraceSummary {
            conv_me: outcome.conv_me,
            conv_au: outcome.conv_au,
            row: &outcome.summary,
        },
        trace: &outcome.trace,
    };
    Ok(serde_json::to_string_pretty(&export)?)
}

/// Writes `traces/<protocol>-<daemon>-s<seed>-<init_hash>.json` under `dir`.
pub fn write_trace(dir: &Path, exp: &Experiment, outcome: &RunOutcome) -> Result<PathBuf, HarnessError> {
    let traces = dir.join("traces");
    fs::create_dir_all(&traces).map_err(|e| HarnessError::io(&traces, e))?;
    let row = &outcome.summary;
    let name = format!(
        "{}-{}-s{}-{}.json",
        row.protocol,
        row.daemon.replace(['(', ')'], ""),
        row.seed,
        row.init_hash
    );
    let path = traces.join(name);
    let json = trace_json(exp, outcome)?;
    fs::write(&path, json + "\n").map_err(|e| HarnessError::io(&path, e))?;
    Ok(path)
}

pub fn summary_path(dir: &Path, format: OutputFormat) -> PathBuf {
    dir.join(match format {
        OutputFormat::Csv => "summary.csv",
        OutputFormat::JsonLines => "summary.jsonl",
    })
}

/// Appends rows to the summary file in `dir`, creating it (with header for
/// CSV) if needed. An existing CSV with a different header is refused.
pub fn append_summary(dir: &Path, format: OutputFormat, rows: &[SummaryRow]) -> Result<PathBuf, HarnessError> {
    fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
    let path = summary_path(dir, format);
    let fresh = fs::metadata(&path).map(|m| m.len() == 0).unwrap_or(true);
    if !fresh && format == OutputFormat::Csv {
        let mut first = String::new();
        let file = File::open(&path).map_err(|e| HarnessError::io(&path, e))?;
        BufReader::new(file)
            .read_line(&mut first)
            .map_err(|e| HarnessError::io(&path, e))?;
        if first.trim_end() != SUMMARY_HEADER {
            return Err(HarnessError::Usage(format!(
                "{} has a different header; refusing to append",
                path.display()
            )));
        }
    }
    let file = OpenOptions::new()
        .create(true)
        .append(true)
        .open(&path)
        .map_err(|e| HarnessError::io(&path, e))?;
    match format {
        OutputFormat::Csv => {
            let mut w = csv::WriterBuilder::new().has_headers(fresh).from_writer(file);
            for row in rows {
                w.serialize(row)?;
            }
            w.flush().map_err(|e| HarnessError::io(&path, e))?;
        }
        OutputFormat::JsonLines => {
            let mut w = std::io::BufWriter::new(file);
            for row in rows {
                serde_json::to_writer(&mut w, row)?;
                w.write_all(b"\n").map_err(|e| HarnessError::io(&path, e))?;
            }
            w.flush().map_err(|e| HarnessError::io(&path, e))?;
        }
    }
    Ok(path)
}

/// Reads a CSV summary back.
pub fn read_summary(path: &Path) -> Result<Vec<SummaryRow>, HarnessError> {
    let mut r = csv::Reader::from_path(path)?;
    Ok(r.deserialize().collect::<Result<_, _>>()?)
}
