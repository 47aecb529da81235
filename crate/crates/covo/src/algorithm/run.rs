use std::time::Instant;

use crate::benchmarks::ObjectiveSpec;
use crate::error::Result;
use crate::rng::RngState;

use super::ops::{
    classify_and_transition, dedupe, init_population, should_terminate, spread,
    uniform_position, update_individual, zero_patient_position, Termination, STAGNATION_EPS,
};
use super::params::CovoParams;
use super::population::{EvalOutcome, Individual, PopulationState, TransitionCounts};

/// One point of the convergence trace.
#[derive(Clone, Copy, Debug)]
pub struct TracePoint {
    pub iteration: usize,
    pub evals: u64,
    pub best_error: f64,
    /// Wall-clock milliseconds since the run started. Measured, hence not
    /// reproducible across reruns; every other field is.
    pub elapsed_ms: f64,
}

/// Outcome of one optimizer run.
///
/// With a fixed seed every field except the wall-clock measurements
/// (`wall_ms`, `TracePoint::elapsed_ms`) is bit-reproducible within one
/// build.
#[derive(Clone, Debug)]
pub struct RunResult {
    pub best_position: Vec<f64>,
    pub best_error: f64,
    /// Per-iteration best-so-far series; `best_error` is non-increasing and
    /// the final entry equals the `best_error` field.
    pub trace: Vec<TracePoint>,
    pub termination: Termination,
    pub seed: u64,
    pub wall_ms: f64,
    /// Per-iteration transition audit (empty for baseline optimizers).
    pub transitions: Vec<TransitionCounts>,
    /// Rare-event notes (non-finite objective values and their handling).
    pub notes: Vec<String>,
}

/// Execute one full optimizer run on `spec` with the given parameters and
/// seed.
///
/// The search domain is taken from the objective; the parameter bounds are
/// preset metadata. The loop per iteration: advance the chaotic parameters,
/// refresh the zero patient, spread new infections, move survivors with the
/// fitness-scaled update, apply death/recovery/re-infection, merge and
/// deduplicate the newly infected, cap the pool, and append a trace point.
pub fn run(spec: &ObjectiveSpec, params: &CovoParams, seed: u64) -> Result<RunResult> {
    let start = Instant::now();
    let mut work = params.for_bounds(spec);
    work.validate()?;
    let mut rng = RngState::new(seed);
    let mut state = init_population(&work, spec, &mut rng)?;

    let mut trace = vec![TracePoint {
        iteration: 0,
        evals: state.evals,
        best_error: state.best_error(),
        elapsed_ms: elapsed_ms(start),
    }];
    let mut transitions = Vec::new();

    let termination = loop {
        if let Some(reason) = should_terminate(&state, &work) {
            break reason;
        }
        state.iteration += 1;
        let prev_best = state.best_error();
        let mut counts = TransitionCounts {
            infected_before: state.infected.len(),
            recovered_before: state.recovered.len(),
            ..TransitionCounts::default()
        };

        // Chaotic parameter evolution; the update operator reads the
        // current death probability through the working parameter copy.
        state.p_die.step();
        state.d_rate.step();
        work.p_die = state.p_die.value();
        work.d_rate = state.d_rate.value();

        refresh_zero_patient(&mut state, &work, spec, &mut rng);
        let spawned = spread(&mut state, &work, spec, &mut rng);
        counts.spawned = spawned.len();
        move_survivors(&mut state, &work, spec, &mut rng);
        classify_and_transition(&mut state, &work, &mut rng, &mut counts);
        score_replacements(&mut state, &work, spec, &mut rng);

        state.infected.extend(spawned);
        let merged = state.infected.len();
        state.infected = dedupe(std::mem::take(&mut state.infected), work.dedupe_eps);
        counts.removed_duplicates = merged - state.infected.len();
        if state.infected.len() > work.max_infected {
            counts.removed_overflow = state.infected.len() - work.max_infected;
            state
                .infected
                .sort_by(|a, b| fit_or_inf(a).total_cmp(&fit_or_inf(b)));
            state.infected.truncate(work.max_infected);
        }

        counts.infected_after = state.infected.len();
        counts.recovered_after = state.recovered.len();
        counts.deaths_total = state.deaths.len();
        transitions.push(counts);

        if prev_best - state.best_error() > STAGNATION_EPS {
            state.stagnation_counter = 0;
        } else {
            state.stagnation_counter += 1;
        }

        trace.push(TracePoint {
            iteration: state.iteration,
            evals: state.evals,
            best_error: state.best_error(),
            elapsed_ms: elapsed_ms(start),
        });
    };

    Ok(RunResult {
        best_position: state.best.position.clone(),
        best_error: state.best_error(),
        trace,
        termination,
        seed,
        wall_ms: elapsed_ms(start),
        transitions,
        notes: state.notes,
    })
}

/// The zero patient is the head of the infected pool; each iteration its
/// solution is rebuilt from the travel/social-distancing branches.
fn refresh_zero_patient(
    state: &mut PopulationState,
    params: &CovoParams,
    spec: &ObjectiveSpec,
    rng: &mut RngState,
) {
    if state.infected.is_empty() {
        return;
    }
    let pos = zero_patient_position(params, spec.dim(), rng);
    if let EvalOutcome::Fit(fit) = state.evaluate_tracked(spec, &pos, rng) {
        state.infected[0] = Individual::evaluated(pos, fit);
    }
}

/// Fitness-scaled moves for every infected individual that survives the
/// death rule (error above the current death probability).
fn move_survivors(
    state: &mut PopulationState,
    params: &CovoParams,
    spec: &ObjectiveSpec,
    rng: &mut RngState,
) {
    let p_die = state.p_die.value();
    for idx in 0..state.infected.len() {
        let Some(fit) = state.infected[idx].fitness else {
            continue;
        };
        if fit <= p_die {
            continue; // dies in the transition step instead of moving
        }
        let pos = update_individual(&state.infected[idx].position, fit, params, rng);
        match state.evaluate_tracked(spec, &pos, rng) {
            EvalOutcome::Fit(new_fit) => {
                state.infected[idx] = Individual::evaluated(pos, new_fit);
            }
            EvalOutcome::NonFinite => {
                let fresh = uniform_position(spec.dim(), params, rng);
                if let EvalOutcome::Fit(new_fit) = state.evaluate_tracked(spec, &fresh, rng) {
                    state.infected[idx] = Individual::evaluated(fresh, new_fit);
                }
            }
            EvalOutcome::Exhausted => return,
        }
    }
}

/// Score the fresh replacements generated by the death rule.
fn score_replacements(
    state: &mut PopulationState,
    params: &CovoParams,
    spec: &ObjectiveSpec,
    rng: &mut RngState,
) {
    for idx in 0..state.infected.len() {
        if state.infected[idx].fitness.is_some() {
            continue;
        }
        let pos = state.infected[idx].position.clone();
        match state.evaluate_tracked(spec, &pos, rng) {
            EvalOutcome::Fit(fit) => state.infected[idx].fitness = Some(fit),
            EvalOutcome::NonFinite => {
                let fresh = uniform_position(spec.dim(), params, rng);
                if let EvalOutcome::Fit(fit) = state.evaluate_tracked(spec, &fresh, rng) {
                    state.infected[idx] = Individual::evaluated(fresh, fit);
                }
            }
            EvalOutcome::Exhausted => return,
        }
    }
}

fn fit_or_inf(ind: &Individual) -> f64 {
    ind.fitness.unwrap_or(f64::INFINITY)
}

pub(crate) fn elapsed_ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}
