//! Transparent comparison optimizers run under the same budget and result
//! contract as the main algorithm: plain random search and a textbook
//! global-best particle swarm.

use std::time::Instant;

use crate::algorithm::{RunResult, Termination, TracePoint};
use crate::benchmarks::ObjectiveSpec;
use crate::error::{Error, Result};
use crate::rng::RngState;

/// Evaluations batched into one trace row by random search.
const RANDOM_SEARCH_BATCH: u64 = 10;

/// Configuration for the baseline optimizers.
#[derive(Clone, Debug)]
pub struct BaselineParams {
    /// Swarm size (particle swarm) and batch hint (unused by random search).
    pub population: usize,
    /// Total evaluation budget.
    pub budget: u64,
    /// Velocity inertia weight.
    pub inertia: f64,
    /// Pull toward each particle's own best.
    pub cognitive: f64,
    /// Pull toward the global best.
    pub social: f64,
}

impl Default for BaselineParams {
    fn default() -> Self {
        Self {
            population: 10,
            budget: 100_000,
            inertia: 0.7,
            cognitive: 1.5,
            social: 1.5,
        }
    }
}

impl BaselineParams {
    fn validate(&self) -> Result<()> {
        if self.population == 0 {
            return Err(Error::InvalidArgument("population must be positive".into()));
        }
        if self.budget < self.population as u64 {
            return Err(Error::InvalidArgument(format!(
                "budget {} is smaller than the population {}",
                self.budget, self.population
            )));
        }
        for (name, v) in [
            ("inertia", self.inertia),
            ("cognitive", self.cognitive),
            ("social", self.social),
        ] {
            if !v.is_finite() {
                return Err(Error::InvalidArgument(format!(
                    "{name} must be finite, got {v}"
                )));
            }
        }
        Ok(())
    }
}

/// Uniform random sampling of the search box; the trace records the
/// best-so-far error once per batch of [`RANDOM_SEARCH_BATCH`] evaluations.
pub fn random_search(spec: &ObjectiveSpec, budget: u64, seed: u64) -> Result<RunResult> {
    if budget == 0 {
        return Err(Error::InvalidArgument("budget must be positive".into()));
    }
    let start = Instant::now();
    let mut rng = RngState::new(seed);
    let (lo, hi) = spec.bounds();
    let span = hi - lo;
    let mut notes = Vec::new();
    let mut best_error = f64::INFINITY;
    let mut best_position = Vec::new();
    let mut evals = 0u64;
    let mut trace = Vec::new();
    let mut iteration = 0usize;
    while evals < budget {
        let batch = RANDOM_SEARCH_BATCH.min(budget - evals);
        for _ in 0..batch {
            let pos: Vec<f64> = (0..spec.dim()).map(|_| lo + span * rng.next_unit()).collect();
            let err = spec.error_of(spec.evaluate(&pos, &mut rng)?);
            evals += 1;
            if !err.is_finite() {
                notes.push(format!("evaluation {evals}: non-finite value skipped"));
                continue;
            }
            if err < best_error {
                best_error = err;
                best_position = pos;
            }
        }
        iteration += 1;
        trace.push(TracePoint {
            iteration,
            evals,
            best_error,
            elapsed_ms: ms(start),
        });
    }
    Ok(RunResult {
        best_position,
        best_error,
        trace,
        termination: Termination::BudgetExhausted,
        seed,
        wall_ms: ms(start),
        transitions: Vec::new(),
        notes,
    })
}

/// Textbook global-best particle swarm: zero initial velocities, velocities
/// clamped to the box span per dimension, positions clamped to the bounds.
pub fn pso(spec: &ObjectiveSpec, params: &BaselineParams, seed: u64) -> Result<RunResult> {
    params.validate()?;
    let start = Instant::now();
    let mut rng = RngState::new(seed);
    let (lo, hi) = spec.bounds();
    let span = hi - lo;
    let dim = spec.dim();
    let n = params.population;
    let mut notes = Vec::new();

    let mut positions: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut velocities: Vec<Vec<f64>> = vec![vec![0.0; dim]; n];
    let mut personal_best: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut personal_err: Vec<f64> = Vec::with_capacity(n);
    let mut global_best = Vec::new();
    let mut global_err = f64::INFINITY;
    let mut evals = 0u64;

    for _ in 0..n {
        let pos: Vec<f64> = (0..dim).map(|_| lo + span * rng.next_unit()).collect();
        let err = scored(spec, &pos, &mut rng, &mut evals, &mut notes)?;
        if err < global_err {
            global_err = err;
            global_best = pos.clone();
        }
        personal_best.push(pos.clone());
        personal_err.push(err);
        positions.push(pos);
    }

    let mut trace = vec![TracePoint {
        iteration: 0,
        evals,
        best_error: global_err,
        elapsed_ms: ms(start),
    }];

    let mut iteration = 0usize;
    while evals < params.budget {
        iteration += 1;
        for i in 0..n {
            if evals >= params.budget {
                break;
            }
            for j in 0..dim {
                let r1 = rng.next_unit();
                let r2 = rng.next_unit();
                let v = params.inertia * velocities[i][j]
                    + params.cognitive * r1 * (personal_best[i][j] - positions[i][j])
                    + params.social * r2 * (global_best[j] - positions[i][j]);
                velocities[i][j] = v.clamp(-span, span);
                positions[i][j] = (positions[i][j] + velocities[i][j]).clamp(lo, hi);
            }
            let err = scored(spec, &positions[i], &mut rng, &mut evals, &mut notes)?;
            if err < personal_err[i] {
                personal_err[i] = err;
                personal_best[i] = positions[i].clone();
            }
            if err < global_err {
                global_err = err;
                global_best = positions[i].clone();
            }
        }
        trace.push(TracePoint {
            iteration,
            evals,
            best_error: global_err,
            elapsed_ms: ms(start),
        });
    }

    Ok(RunResult {
        best_position: global_best,
        best_error: global_err,
        trace,
        termination: Termination::BudgetExhausted,
        seed,
        wall_ms: ms(start),
        transitions: Vec::new(),
        notes,
    })
}

fn scored(
    spec: &ObjectiveSpec,
    pos: &[f64],
    rng: &mut RngState,
    evals: &mut u64,
    notes: &mut Vec<String>,
) -> Result<f64> {
    let err = spec.error_of(spec.evaluate(pos, rng)?);
    *evals += 1;
    if err.is_finite() {
        Ok(err)
    } else {
        notes.push(format!("evaluation {evals}: non-finite value treated as worst"));
        Ok(f64::INFINITY)
    }
}

fn ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::benchmarks::BenchmarkId;
    use std::sync::atomic::{AtomicBool, Ordering};
    use std::sync::Arc;

    fn f1(dim: usize) -> ObjectiveSpec {
        ObjectiveSpec::benchmark(BenchmarkId::F1, dim).unwrap()
    }

    #[test]
    fn random_search_contract() {
        let spec = f1(5);
        let one = random_search(&spec, 1, 3).unwrap();
        assert_eq!(one.trace.len(), 1);
        assert_eq!(one.trace[0].evals, 1);

        let a = random_search(&spec, 500, 42).unwrap();
        let b = random_search(&spec, 500, 42).unwrap();
        assert_eq!(a.best_error.to_bits(), b.best_error.to_bits());
        assert_eq!(a.best_position, b.best_position);
        for w in a.trace.windows(2) {
            assert!(w[1].best_error <= w[0].best_error);
        }
        assert!(a.trace.iter().all(|t| t.evals <= 500));
        assert_eq!(a.trace.last().unwrap().evals, 500);
    }

    #[test]
    fn pso_contract() {
        let spec = f1(5);
        let params = BaselineParams {
            population: 8,
            budget: 8, // init only
            ..BaselineParams::default()
        };
        let init_only = pso(&spec, &params, 7).unwrap();
        assert_eq!(init_only.trace.len(), 1);
        assert_eq!(init_only.trace[0].evals, 8);

        let params = BaselineParams {
            population: 8,
            budget: 500,
            ..BaselineParams::default()
        };
        let a = pso(&spec, &params, 7).unwrap();
        let b = pso(&spec, &params, 7).unwrap();
        assert_eq!(a.best_error.to_bits(), b.best_error.to_bits());
        for w in a.trace.windows(2) {
            assert!(w[1].best_error <= w[0].best_error);
        }
        assert!(a.trace.iter().all(|t| t.evals <= 500));
        // The swarm actually improves on the sphere.
        assert!(a.best_error < a.trace[0].best_error);
    }

    #[test]
    fn pso_rejects_budget_below_population() {
        let spec = f1(4);
        let params = BaselineParams {
            population: 10,
            budget: 5,
            ..BaselineParams::default()
        };
        assert!(pso(&spec, &params, 1).is_err());
    }

    #[test]
    fn baselines_stay_in_bounds() {
        // Instrumented objective: records any out-of-bounds probe.
        let violated = Arc::new(AtomicBool::new(false));
        let flag = Arc::clone(&violated);
        let spec = ObjectiveSpec::custom("bounded_sphere", 6, -3.0, 3.0, 0.0, move |x| {
            if x.iter().any(|v| !(-3.0..=3.0).contains(v)) {
                flag.store(true, Ordering::Relaxed);
            }
            x.iter().map(|v| v * v).sum()
        })
        .unwrap();

        random_search(&spec, 300, 5).unwrap();
        let params = BaselineParams {
            population: 6,
            budget: 300,
            ..BaselineParams::default()
        };
        pso(&spec, &params, 5).unwrap();
        assert!(!violated.load(Ordering::Relaxed));
    }
}
