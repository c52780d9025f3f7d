//! Regret traces on disk: one CSV per repetition with a JSON sidecar, an
//! aggregate CSV of mean cumulative regret, and a run-level metadata file.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const HEADER: [&str; 4] = ["round", "baseline", "reward", "cum_regret"];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub round: u64,
    pub baseline: f64,
    pub reward: f64,
    pub cum_regret: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceMeta {
    pub algorithm: String,
    pub repetition: usize,
    pub instance: Option<usize>,
    pub seed: u64,
    pub config_hash: String,
    pub exploration_rounds: Option<u64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegretTrace {
    pub meta: TraceMeta,
    pub rows: Vec<TraceRow>,
}

impl RegretTrace {
    pub fn final_regret(&self) -> f64 {
        self.rows.last().map_or(0.0, |r| r.cum_regret)
    }

    /// `trace_rep003.csv`, or `trace_inst01_rep003.csv` inside a sweep.
    pub fn file_name(&self) -> String {
        match self.meta.instance {
            Some(i) => format!("trace_inst{i:02}_rep{:03}.csv", self.meta.repetition),
            None => format!("trace_rep{:03}.csv", self.meta.repetition),
        }
    }
}

fn trace_err(path: &Path, e: impl std::fmt::Display) -> Error {
    Error::Trace {
        path: path.to_owned(),
        msg: e.to_string(),
    }
}

fn sidecar(csv_path: &Path) -> PathBuf {
    csv_path.with_extension("json")
}

/// Writes the CSV and its JSON sidecar. Floats are written in their
/// shortest exactly round-tripping form.
pub fn write_trace(trace: &RegretTrace, csv_path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(csv_path).map_err(|e| trace_err(csv_path, e))?;
    if trace.rows.is_empty() {
        w.write_record(HEADER).map_err(|e| trace_err(csv_path, e))?;
    }
    // the header row comes from the field names of `TraceRow`
    for row in &trace.rows {
        w.serialize(row).map_err(|e| trace_err(csv_path, e))?;
    }
    w.flush().map_err(|e| Error::io(csv_path, e))?;
    let meta_path = sidecar(csv_path);
    let json = serde_json::to_string_pretty(&trace.meta).map_err(|e| trace_err(&meta_path, e))?;
    fs::write(&meta_path, json + "\n").map_err(|e| Error::io(&meta_path, e))
}

pub fn read_trace(csv_path: &Path) -> Result<RegretTrace> {
    let mut r = csv::Reader::from_path(csv_path).map_err(|e| trace_err(csv_path, e))?;
    let header = r.headers().map_err(|e| trace_err(csv_path, e))?;
    if header.iter().ne(HEADER) {
        return Err(trace_err(csv_path, format!("unexpected header {header:?}")));
    }
    let rows = r
        .deserialize()
        .collect::<std::result::Result<Vec<TraceRow>, _>>()
        .map_err(|e| trace_err(csv_path, e))?;
    let meta_path = sidecar(csv_path);
    let text = fs::read_to_string(&meta_path).map_err(|e| Error::io(&meta_path, e))?;
    let meta = serde_json::from_str(&text).map_err(|e| trace_err(&meta_path, e))?;
    Ok(RegretTrace { meta, rows })
}

/// Writes every trace, `aggregate.csv` (mean cumulative regret per round)
/// and `metadata.json`. Returns the trace CSV paths in input order.
pub fn write_run(
    dir: &Path,
    traces: &[RegretTrace],
    metadata: &serde_json::Value,
) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut paths = Vec::with_capacity(traces.len());
    for trace in traces {
        let path = dir.join(trace.file_name());
        write_trace(trace, &path)?;
        paths.push(path);
    }

    let agg_path = dir.join("aggregate.csv");
    let mut w = csv::Writer::from_path(&agg_path).map_err(|e| trace_err(&agg_path, e))?;
    w.write_record(["round", "mean_cum_regret"])
        .map_err(|e| trace_err(&agg_path, e))?;
    let means = crate::harness::mean_cum_regret(traces);
    for (t, mean) in means.iter().enumerate() {
        let round = traces[0].rows[t].round;
        w.serialize((round, mean))
            .map_err(|e| trace_err(&agg_path, e))?;
    }
    w.flush().map_err(|e| Error::io(&agg_path, e))?;

    let meta_path = dir.join("metadata.json");
    let json = serde_json::to_string_pretty(metadata).map_err(|e| trace_err(&meta_path, e))?;
    fs::write(&meta_path, json + "\n").map_err(|e| Error::io(&meta_path, e))?;
    Ok(paths)
}
