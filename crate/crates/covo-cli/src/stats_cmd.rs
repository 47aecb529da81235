//! The stats subcommand: aggregate one or more results files into one value
//! per (function, algorithm) — the median over seeds of each run's final
//! best error — then compare algorithms with a Friedman test over functions
//! and pairwise Wilcoxon / Welch tests.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use covo::benchmarks::BenchmarkId;
use covo::stats::{friedman, t_test, wilcoxon_signed_rank, SampleSet};

use crate::csvio::{fmt_float, read_results, ResultsFile, REPORT_HEADER};
use crate::errors::{io_at, CliError};

/// Canonical ordering: suite functions first in suite order, then custom
/// names alphabetically.
fn function_key(name: &str) -> (usize, String) {
    match BenchmarkId::parse(name) {
        Some(id) => (
            BenchmarkId::ALL.iter().position(|x| *x == id).unwrap(),
            String::new(),
        ),
        None => (usize::MAX, name.to_string()),
    }
}

fn median(mut values: Vec<f64>) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        (values[n / 2 - 1] + values[n / 2]) / 2.0
    }
}

/// function -> algorithm -> aggregate error.
type Aggregate = BTreeMap<String, BTreeMap<String, f64>>;

fn aggregate(paths: &[impl AsRef<Path>]) -> Result<Aggregate, CliError> {
    // Per (function, algorithm): per-run final errors keyed by run id.
    let mut finals: HashMap<(String, String), HashMap<String, (u64, f64)>> = HashMap::new();
    let mut direct: Aggregate = BTreeMap::new();
    for path in paths {
        match read_results(path.as_ref())? {
            ResultsFile::Trace(rows) => {
                for row in rows {
                    let cell = finals
                        .entry((row.function.clone(), row.algorithm.clone()))
                        .or_default();
                    let entry = cell.entry(row.run_id.clone()).or_insert((0, f64::INFINITY));
                    if row.iteration >= entry.0 {
                        *entry = (row.iteration, row.best_error);
                    }
                }
            }
            ResultsFile::Summary(rows) => {
                for row in rows {
                    direct
                        .entry(row.function.clone())
                        .or_default()
                        .insert(row.algorithm.clone(), row.median);
                }
            }
        }
    }
    let mut agg = direct;
    for ((function, algorithm), runs) in finals {
        let values: Vec<f64> = runs.values().map(|(_, v)| *v).collect();
        agg.entry(function)
            .or_default()
            .insert(algorithm, median(values));
    }
    Ok(agg)
}

/// Run the comparison battery and write the report CSV. Requires at least
/// two algorithms; the Friedman row needs at least two common functions and
/// is skipped (with a note on stderr) otherwise.
pub fn cmd_stats(inputs: &[impl AsRef<Path>], out: &Path) -> Result<(), CliError> {
    if inputs.is_empty() {
        return Err(CliError::usage("at least one results CSV is required"));
    }
    let agg = aggregate(inputs)?;

    let algorithms: BTreeSet<String> = agg
        .values()
        .flat_map(|by_algo| by_algo.keys().cloned())
        .collect();
    if algorithms.len() < 2 {
        return Err(CliError::usage(format!(
            "need results from at least 2 algorithms, found {}",
            algorithms.len()
        )));
    }

    // Blocks: functions with a value for every algorithm, canonical order.
    let mut functions: Vec<String> = agg
        .iter()
        .filter(|(_, by_algo)| algorithms.iter().all(|a| by_algo.contains_key(a)))
        .map(|(f, _)| f.clone())
        .collect();
    functions.sort_by_key(|f| function_key(f));
    if functions.is_empty() {
        return Err(CliError::usage(
            "no function has results for every algorithm",
        ));
    }

    let algorithms: Vec<String> = algorithms.into_iter().collect();
    let series: BTreeMap<&String, Vec<f64>> = algorithms
        .iter()
        .map(|a| {
            let values = functions.iter().map(|f| agg[f][a]).collect::<Vec<_>>();
            (a, values)
        })
        .collect();

    let mut out_text = String::new();
    out_text.push_str(REPORT_HEADER);
    out_text.push('\n');

    if functions.len() >= 2 {
        let matrix: Vec<Vec<f64>> = functions
            .iter()
            .map(|f| algorithms.iter().map(|a| agg[f][a]).collect())
            .collect();
        let r = friedman(&matrix)?;
        let _ = writeln!(
            out_text,
            "friedman,all,-,{},{}",
            fmt_float(r.statistic),
            fmt_float(r.p_value)
        );
    } else {
        eprintln!("note: only one common function; skipping the Friedman test");
    }

    for i in 0..algorithms.len() {
        for j in i + 1..algorithms.len() {
            let (a, b) = (&algorithms[i], &algorithms[j]);
            let sa = SampleSet::new(a.clone(), series[a].clone())?;
            let sb = SampleSet::new(b.clone(), series[b].clone())?;
            let w = wilcoxon_signed_rank(&sa, &sb)?;
            let _ = writeln!(
                out_text,
                "wilcoxon,{a},{b},{},{}",
                fmt_float(w.statistic),
                fmt_float(w.p_value)
            );
        }
    }
    for i in 0..algorithms.len() {
        for j in i + 1..algorithms.len() {
            let (a, b) = (&algorithms[i], &algorithms[j]);
            // Welch needs two values per side; a single common function
            // cannot support it.
            if series[a].len() < 2 {
                eprintln!("note: fewer than 2 common functions; skipping the t-test");
                break;
            }
            let sa = SampleSet::new(a.clone(), series[a].clone())?;
            let sb = SampleSet::new(b.clone(), series[b].clone())?;
            let t = t_test(&sa, &sb)?;
            let _ = writeln!(
                out_text,
                "t_test,{a},{b},{},{}",
                fmt_float(t.statistic),
                fmt_float(t.p_value)
            );
        }
    }

    fs::write(out, out_text).map_err(|e| io_at(out, e))?;
    println!("wrote {}", out.display());
    Ok(())
}
