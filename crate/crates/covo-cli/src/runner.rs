//! Multi-seed experiment execution: one cell per (function, algorithm,
//! seed), run on a bounded worker pool, collected and sorted before any
//! file is written so output contents are independent of scheduling.

use rayon::prelude::*;

use covo::algorithm::{run as covo_run, RunResult};
use covo::baselines::{pso, random_search};
use covo::benchmarks::ObjectiveSpec;

use crate::config::ResolvedConfig;
use crate::errors::CliError;

/// Algorithms the harness can run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum AlgorithmId {
    Covo,
    RandomSearch,
    Pso,
}

impl AlgorithmId {
    pub fn name(&self) -> &'static str {
        match self {
            AlgorithmId::Covo => "covo",
            AlgorithmId::RandomSearch => "random_search",
            AlgorithmId::Pso => "pso",
        }
    }

    pub fn parse(s: &str) -> Result<Self, CliError> {
        match s.trim().to_ascii_lowercase().as_str() {
            "covo" => Ok(AlgorithmId::Covo),
            "random_search" | "random-search" | "rs" => Ok(AlgorithmId::RandomSearch),
            "pso" => Ok(AlgorithmId::Pso),
            other => Err(CliError::usage(format!(
                "unknown algorithm {other:?}; expected covo, random_search, or pso"
            ))),
        }
    }
}

/// One completed (function, algorithm, seed) cell.
#[derive(Clone, Debug)]
pub struct CellResult {
    pub run_id: String,
    pub function: String,
    pub algorithm: AlgorithmId,
    pub seed: u64,
    pub result: RunResult,
}

/// Worker-pool size: `COVO_THREADS` if set, otherwise the machine's
/// available parallelism.
pub fn thread_cap() -> Result<usize, CliError> {
    match std::env::var("COVO_THREADS") {
        Ok(v) => {
            let n: usize = v
                .trim()
                .parse()
                .map_err(|_| CliError::usage(format!("COVO_THREADS must be a positive integer, got {v:?}")))?;
            if n == 0 {
                return Err(CliError::usage("COVO_THREADS must be positive".into()));
            }
            Ok(n)
        }
        Err(_) => Ok(std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(1)),
    }
}

/// Run every (function, algorithm, seed) cell and return the results sorted
/// by function order, algorithm, then seed.
pub fn run_cells(cfg: &ResolvedConfig) -> Result<Vec<CellResult>, CliError> {
    let specs = cfg
        .functions
        .iter()
        .map(|&id| ObjectiveSpec::benchmark(id, cfg.dimension))
        .collect::<Result<Vec<_>, _>>()?;

    let mut cells = Vec::new();
    for (fn_idx, _) in specs.iter().enumerate() {
        for &algorithm in &cfg.algorithms {
            for &seed in &cfg.seeds {
                cells.push((fn_idx, algorithm, seed));
            }
        }
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(thread_cap()?)
        .build()
        .map_err(|e| CliError::usage(format!("failed to build worker pool: {e}")))?;

    let mut results = pool.install(|| {
        cells
            .par_iter()
            .map(|&(fn_idx, algorithm, seed)| {
                let spec = &specs[fn_idx];
                let result = match algorithm {
                    AlgorithmId::Covo => covo_run(spec, &cfg.covo_params, seed)?,
                    AlgorithmId::RandomSearch => random_search(spec, cfg.budget, seed)?,
                    AlgorithmId::Pso => pso(spec, &cfg.pso_params, seed)?,
                };
                Ok(CellResult {
                    run_id: format!("{}-{}-s{}", spec.name(), algorithm.name(), seed),
                    function: spec.name().to_string(),
                    algorithm,
                    seed,
                    result,
                })
            })
            .collect::<Result<Vec<_>, covo::Error>>()
    })?;

    results.sort_by(|a, b| {
        let fa = cfg.functions.iter().position(|id| id.name() == a.function);
        let fb = cfg.functions.iter().position(|id| id.name() == b.function);
        (fa, a.algorithm, a.seed).cmp(&(fb, b.algorithm, b.seed))
    });
    Ok(results)
}
