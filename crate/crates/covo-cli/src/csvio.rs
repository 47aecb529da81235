//! CSV schemas and readers/writers. Writers format floats in scientific
//! notation so the files round-trip through the readers losslessly; readers
//! report the offending line number on malformed input.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use covo::stats::{describe, SampleSet};

use crate::config::TimingMode;
use crate::errors::{io_at, CliError};
use crate::runner::CellResult;

pub const TRACE_HEADER: &str = "run_id,seed,algorithm,function,iteration,evals,best_error,elapsed_ms";
pub const SUMMARY_HEADER: &str = "function,algorithm,runs,best,median,worst,mean,std";
pub const TIMINGS_HEADER: &str = "run_id,seed,algorithm,function,iterations,evals,wall_ms";
pub const REPORT_HEADER: &str = "test,algorithm_a,algorithm_b,statistic,p_value";

/// Lossless scientific-notation float formatting.
pub fn fmt_float(v: f64) -> String {
    format!("{v:e}")
}

/// Per-iteration convergence rows for every run.
///
/// With timing capture off (the default) the `elapsed_ms` column is written
/// as zero so reruns of the same configuration produce byte-identical
/// files; `--timing full` writes the measured values instead.
pub fn write_trace(path: &Path, results: &[CellResult], timing: TimingMode) -> Result<(), CliError> {
    let mut out = String::with_capacity(1 << 20);
    out.push_str(TRACE_HEADER);
    out.push('\n');
    for cell in results {
        for t in &cell.result.trace {
            let elapsed = match timing {
                TimingMode::None => 0.0,
                TimingMode::Full => t.elapsed_ms,
            };
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{:.3}",
                cell.run_id,
                cell.seed,
                cell.algorithm.name(),
                cell.function,
                t.iteration,
                t.evals,
                fmt_float(t.best_error),
                elapsed,
            );
        }
    }
    fs::write(path, out).map_err(|e| io_at(path, e))
}

/// Five-number summary of the per-seed final errors for every
/// (function, algorithm) pair, in input order of first appearance.
pub fn write_summary(path: &Path, results: &[CellResult]) -> Result<(), CliError> {
    let mut order: Vec<(String, String)> = Vec::new();
    let mut samples: std::collections::HashMap<(String, String), Vec<f64>> =
        std::collections::HashMap::new();
    for cell in results {
        let key = (cell.function.clone(), cell.algorithm.name().to_string());
        if !samples.contains_key(&key) {
            order.push(key.clone());
        }
        samples.entry(key).or_default().push(cell.result.best_error);
    }

    let mut out = String::new();
    out.push_str(SUMMARY_HEADER);
    out.push('\n');
    for key in &order {
        let values = &samples[key];
        let d = describe(&SampleSet::new(format!("{}/{}", key.0, key.1), values.clone())?);
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            key.0,
            key.1,
            values.len(),
            fmt_float(d.best),
            fmt_float(d.median),
            fmt_float(d.worst),
            fmt_float(d.mean),
            fmt_float(d.std),
        );
    }
    fs::write(path, out).map_err(|e| io_at(path, e))
}

/// Measured per-run wall-clock milliseconds. Not reproducible across
/// reruns by nature; kept separate from the trace for that reason.
pub fn write_timings(path: &Path, results: &[CellResult]) -> Result<(), CliError> {
    let mut out = String::new();
    out.push_str(TIMINGS_HEADER);
    out.push('\n');
    for cell in results {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{:.3}",
            cell.run_id,
            cell.seed,
            cell.algorithm.name(),
            cell.function,
            cell.result.trace.len().saturating_sub(1),
            cell.result.trace.last().map_or(0, |t| t.evals),
            cell.result.wall_ms,
        );
    }
    fs::write(path, out).map_err(|e| io_at(path, e))
}

/// One parsed trace row.
#[derive(Clone, Debug)]
pub struct TraceRow {
    pub run_id: String,
    pub seed: u64,
    pub algorithm: String,
    pub function: String,
    pub iteration: u64,
    pub evals: u64,
    pub best_error: f64,
    pub elapsed_ms: f64,
}

/// One parsed summary row.
#[derive(Clone, Debug)]
pub struct SummaryRow {
    pub function: String,
    pub algorithm: String,
    pub runs: u64,
    pub best: f64,
    pub median: f64,
    pub worst: f64,
    pub mean: f64,
    pub std: f64,
}

/// A results file the stats command accepts.
pub enum ResultsFile {
    Trace(Vec<TraceRow>),
    Summary(Vec<SummaryRow>),
}

fn bad_line(path: &Path, line_no: usize, msg: impl std::fmt::Display) -> CliError {
    CliError::usage(format!("{}:{line_no}: {msg}", path.display()))
}

fn parse_field<T: std::str::FromStr>(
    path: &Path,
    line_no: usize,
    name: &str,
    raw: &str,
) -> Result<T, CliError> {
    raw.trim()
        .parse()
        .map_err(|_| bad_line(path, line_no, format!("invalid {name} value {raw:?}")))
}

pub fn read_trace(path: &Path) -> Result<Vec<TraceRow>, CliError> {
    let text = fs::read_to_string(path).map_err(|e| io_at(path, e))?;
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim() == TRACE_HEADER => {}
        Some((_, header)) => {
            return Err(bad_line(
                path,
                1,
                format!("expected trace header {TRACE_HEADER:?}, got {header:?}"),
            ))
        }
        None => return Err(bad_line(path, 1, "empty file")),
    }
    let mut rows = Vec::new();
    for (idx, line) in lines {
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 8 {
            return Err(bad_line(path, line_no, format!("expected 8 fields, got {}", f.len())));
        }
        rows.push(TraceRow {
            run_id: f[0].to_string(),
            seed: parse_field(path, line_no, "seed", f[1])?,
            algorithm: f[2].trim().to_string(),
            function: f[3].trim().to_string(),
            iteration: parse_field(path, line_no, "iteration", f[4])?,
            evals: parse_field(path, line_no, "evals", f[5])?,
            best_error: parse_field(path, line_no, "best_error", f[6])?,
            elapsed_ms: parse_field(path, line_no, "elapsed_ms", f[7])?,
        });
    }
    Ok(rows)
}

pub fn read_summary(path: &Path) -> Result<Vec<SummaryRow>, CliError> {
    let text = fs::read_to_string(path).map_err(|e| io_at(path, e))?;
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim() == SUMMARY_HEADER => {}
        Some((_, header)) => {
            return Err(bad_line(
                path,
                1,
                format!("expected summary header {SUMMARY_HEADER:?}, got {header:?}"),
            ))
        }
        None => return Err(bad_line(path, 1, "empty file")),
    }
    let mut rows = Vec::new();
    for (idx, line) in lines {
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 8 {
            return Err(bad_line(path, line_no, format!("expected 8 fields, got {}", f.len())));
        }
        rows.push(SummaryRow {
            function: f[0].trim().to_string(),
            algorithm: f[1].trim().to_string(),
            runs: parse_field(path, line_no, "runs", f[2])?,
            best: parse_field(path, line_no, "best", f[3])?,
            median: parse_field(path, line_no, "median", f[4])?,
            worst: parse_field(path, line_no, "worst", f[5])?,
            mean: parse_field(path, line_no, "mean", f[6])?,
            std: parse_field(path, line_no, "std", f[7])?,
        });
    }
    Ok(rows)
}

/// Sniff the header and parse as whichever schema matches.
pub fn read_results(path: &Path) -> Result<ResultsFile, CliError> {
    let text = fs::read_to_string(path).map_err(|e| io_at(path, e))?;
    match text.lines().next().map(str::trim) {
        Some(h) if h == TRACE_HEADER => Ok(ResultsFile::Trace(read_trace(path)?)),
        Some(h) if h == SUMMARY_HEADER => Ok(ResultsFile::Summary(read_summary(path)?)),
        Some(h) => Err(bad_line(
            path,
            1,
            format!("unrecognized header {h:?}; expected a trace or summary file"),
        )),
        None => Err(bad_line(path, 1, "empty file")),
    }
}

/// Signal file: a `value` header followed by one sample per line.
pub fn read_signal(path: &Path) -> Result<Vec<f64>, CliError> {
    let text = fs::read_to_string(path).map_err(|e| io_at(path, e))?;
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim() == "value" => {}
        Some((_, header)) => {
            return Err(bad_line(path, 1, format!("expected header \"value\", got {header:?}")))
        }
        None => return Err(bad_line(path, 1, "empty file")),
    }
    let mut values = Vec::new();
    for (idx, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        values.push(parse_field(path, idx + 1, "sample", line)?);
    }
    Ok(values)
}
