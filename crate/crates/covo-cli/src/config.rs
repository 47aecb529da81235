//! Experiment configuration: JSON config file, command-line flag overrides
//! (flags win), and resolution into runnable parameter sets.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use covo::algorithm::CovoParams;
use covo::baselines::BaselineParams;
use covo::benchmarks::BenchmarkId;

use crate::errors::{io_at, CliError};
use crate::runner::AlgorithmId;

/// Whether trace rows carry measured wall-clock values.
///
/// The default `none` keeps trace files byte-reproducible across reruns;
/// measured per-run wall times always go to the separate timings file.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum TimingMode {
    #[default]
    None,
    Full,
}

/// Seed specification: an explicit list or a contiguous range.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SeedSpec {
    List(Vec<u64>),
    Range { base: u64, count: u64 },
}

impl SeedSpec {
    pub fn seeds(&self) -> Vec<u64> {
        match self {
            SeedSpec::List(v) => v.clone(),
            SeedSpec::Range { base, count } => (0..*count).map(|i| base + i).collect(),
        }
    }

    /// Parses `"base:count"` or a comma-separated list.
    pub fn parse(s: &str) -> Result<Self, CliError> {
        let s = s.trim();
        if let Some((base, count)) = s.split_once(':') {
            let base = base
                .trim()
                .parse()
                .map_err(|_| CliError::usage(format!("invalid seed base in {s:?}")))?;
            let count = count
                .trim()
                .parse()
                .map_err(|_| CliError::usage(format!("invalid seed count in {s:?}")))?;
            return Ok(SeedSpec::Range { base, count });
        }
        let list = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse()
                    .map_err(|_| CliError::usage(format!("invalid seed {t:?}")))
            })
            .collect::<Result<Vec<u64>, _>>()?;
        Ok(SeedSpec::List(list))
    }
}

/// Optional per-field overrides applied on top of the chosen preset.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CovoOverrides {
    pub population: Option<usize>,
    /// Pin the ordinary spreading rate to a constant.
    pub s_rate: Option<f64>,
    /// Pin the super-spreading rate to a constant.
    pub ss_rate: Option<f64>,
    pub s_rate_range: Option<(f64, f64)>,
    pub ss_rate_range: Option<(f64, f64)>,
    pub p_travel: Option<f64>,
    pub p_die: Option<f64>,
    pub d_rate: Option<f64>,
    pub delta: Option<f64>,
    pub h_dist: Option<f64>,
    pub threshold: Option<f64>,
    pub p_spreader: Option<f64>,
    pub super_contacts: Option<usize>,
    pub p_reinfected: Option<f64>,
    pub p_isolation: Option<f64>,
    pub t_rate: Option<f64>,
    pub max_iter: Option<usize>,
    pub stagnation_k: Option<usize>,
    pub dedupe_eps: Option<f64>,
    pub max_infected: Option<usize>,
    pub chaos_b: Option<f64>,
    pub chaos_p: Option<f64>,
}

impl CovoOverrides {
    pub fn apply(&self, p: &mut CovoParams) {
        if let Some(v) = self.population {
            p.population = v;
        }
        if let Some(v) = self.s_rate {
            p.s_rate_range = (v, v);
        }
        if let Some(v) = self.ss_rate {
            p.ss_rate_range = (v, v);
        }
        if let Some(v) = self.s_rate_range {
            p.s_rate_range = v;
        }
        if let Some(v) = self.ss_rate_range {
            p.ss_rate_range = v;
        }
        if let Some(v) = self.p_travel {
            p.p_travel = v;
        }
        if let Some(v) = self.p_die {
            p.p_die = v;
        }
        if let Some(v) = self.d_rate {
            p.d_rate = v;
        }
        if let Some(v) = self.delta {
            p.delta = v;
        }
        if let Some(v) = self.h_dist {
            p.h_dist = v;
        }
        if let Some(v) = self.threshold {
            p.threshold = v;
        }
        if let Some(v) = self.p_spreader {
            p.p_spreader = v;
        }
        if let Some(v) = self.super_contacts {
            p.super_contacts = v;
        }
        if let Some(v) = self.p_reinfected {
            p.p_reinfected = v;
        }
        if let Some(v) = self.p_isolation {
            p.p_isolation = v;
        }
        if let Some(v) = self.t_rate {
            p.t_rate = v;
        }
        if let Some(v) = self.max_iter {
            p.max_iter = v;
        }
        if let Some(v) = self.stagnation_k {
            p.stagnation_k = v;
        }
        if let Some(v) = self.dedupe_eps {
            p.dedupe_eps = v;
        }
        if let Some(v) = self.max_infected {
            p.max_infected = v;
        }
        if let Some(v) = self.chaos_b {
            p.chaos_b = v;
        }
        if let Some(v) = self.chaos_p {
            p.chaos_p = v;
        }
    }
}

/// Particle-swarm knobs.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PsoOverrides {
    pub population: Option<usize>,
    pub inertia: Option<f64>,
    pub cognitive: Option<f64>,
    pub social: Option<f64>,
}

impl PsoOverrides {
    pub fn to_params(&self, budget: u64) -> BaselineParams {
        let mut p = BaselineParams {
            budget,
            ..BaselineParams::default()
        };
        if let Some(v) = self.population {
            p.population = v;
        }
        if let Some(v) = self.inertia {
            p.inertia = v;
        }
        if let Some(v) = self.cognitive {
            p.cognitive = v;
        }
        if let Some(v) = self.social {
            p.social = v;
        }
        p
    }
}

/// Benchmark-experiment configuration. Every key can be set in a JSON
/// config file and overridden by flags.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    /// Benchmark functions to run (`"F1"`..`"F13"`).
    pub functions: Vec<String>,
    pub dimension: usize,
    /// Algorithms: `covo`, `random_search`, `pso`.
    pub algorithms: Vec<String>,
    /// Parameter preset: `tableI` or `tableII`.
    pub preset: String,
    pub seeds: SeedSpec,
    /// Evaluation budget per run.
    pub budget: u64,
    /// Output directory.
    pub out: PathBuf,
    pub timing: TimingMode,
    pub covo: CovoOverrides,
    pub pso: PsoOverrides,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            functions: BenchmarkId::ALL.iter().map(|id| id.name().to_string()).collect(),
            dimension: 30,
            algorithms: vec![
                "covo".to_string(),
                "random_search".to_string(),
                "pso".to_string(),
            ],
            preset: "tableII".to_string(),
            seeds: SeedSpec::Range {
                base: 42,
                count: 21,
            },
            budget: 100_000,
            out: PathBuf::from("covo-out"),
            timing: TimingMode::None,
            covo: CovoOverrides::default(),
            pso: PsoOverrides::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| io_at(path, e))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
    }

    /// Parse and validate into runnable form.
    pub fn resolve(&self) -> Result<ResolvedConfig, CliError> {
        if self.functions.is_empty() {
            return Err(CliError::usage("at least one function is required"));
        }
        if self.algorithms.is_empty() {
            return Err(CliError::usage("at least one algorithm is required"));
        }
        let functions = self
            .functions
            .iter()
            .map(|name| {
                BenchmarkId::parse(name)
                    .ok_or_else(|| CliError::usage(format!("unknown function {name:?}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let algorithms = self
            .algorithms
            .iter()
            .map(|name| AlgorithmId::parse(name))
            .collect::<Result<Vec<_>, _>>()?;
        let seeds = self.seeds.seeds();
        if seeds.is_empty() {
            return Err(CliError::usage("at least one seed is required"));
        }

        let mut covo_params = CovoParams::preset(&self.preset)?;
        self.covo.apply(&mut covo_params);
        covo_params.max_evals = Some(self.budget);
        if self.covo.max_iter.is_none() {
            // The evaluation budget is the binding limit by default.
            covo_params.max_iter = usize::try_from(self.budget).unwrap_or(usize::MAX);
        }
        covo_params.validate()?;

        let pso_params = self.pso.to_params(self.budget);
        if self.budget < covo_params.population as u64
            || self.budget < pso_params.population as u64
        {
            return Err(CliError::usage(format!(
                "budget {} is smaller than the population size",
                self.budget
            )));
        }

        Ok(ResolvedConfig {
            functions,
            dimension: self.dimension,
            algorithms,
            seeds,
            budget: self.budget,
            out: self.out.clone(),
            timing: self.timing,
            covo_params,
            pso_params,
        })
    }
}

/// Validated, runnable experiment plan.
#[derive(Clone, Debug)]
pub struct ResolvedConfig {
    pub functions: Vec<BenchmarkId>,
    pub dimension: usize,
    pub algorithms: Vec<AlgorithmId>,
    pub seeds: Vec<u64>,
    pub budget: u64,
    pub out: PathBuf,
    pub timing: TimingMode,
    pub covo_params: CovoParams,
    pub pso_params: BaselineParams,
}
