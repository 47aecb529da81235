use crate::benchmarks::ObjectiveSpec;
use crate::error::{Error, Result};
use crate::rng::{opposition, ChaoticMapState, RngState};

use super::params::CovoParams;
use super::population::{EvalOutcome, Individual, PopulationState, Status, TransitionCounts};

/// Absolute improvement below which an iteration counts as stagnant.
pub const STAGNATION_EPS: f64 = 1e-12;

/// Why a run stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Termination {
    /// The iteration or evaluation budget ran out.
    BudgetExhausted,
    /// The best error stopped improving for `stagnation_k` iterations.
    Stagnation,
    /// No infected individuals remain and re-infection cannot occur.
    PopulationExtinct,
}

impl std::fmt::Display for Termination {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Termination::BudgetExhausted => "budget_exhausted",
            Termination::Stagnation => "stagnation",
            Termination::PopulationExtinct => "population_extinct",
        })
    }
}

/// Euclidean distance between two equal-length positions.
pub fn pair_distance(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            got: b.len(),
        });
    }
    Ok(a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt())
}

/// Social-distancing transform of a pairwise distance: a distance below the
/// safe distance Δ maps to the shortfall `Δ - dist`; a distance at or above
/// Δ passes through unchanged.
pub fn social_distance(dist: f64, delta: f64) -> f64 {
    if dist < delta {
        delta - dist
    } else {
        dist
    }
}

/// Draw from a rate range; a degenerate range pins the rate to a constant.
pub(crate) fn draw_rate(range: (f64, f64), rng: &mut RngState) -> f64 {
    if range.0 >= range.1 {
        range.0
    } else {
        rng.next_uniform(range.0, range.1)
            .expect("rate ranges are validated")
    }
}

/// Fresh uniform position in the search box.
pub(crate) fn uniform_position(dim: usize, params: &CovoParams, rng: &mut RngState) -> Vec<f64> {
    let span = params.upper - params.lower;
    (0..dim).map(|_| params.lower + span * rng.next_unit()).collect()
}

/// Fresh zero-patient position.
///
/// A travel draw picks between the super-spreading jump and the two
/// stay-home branches: below the threshold the position is re-randomized
/// component-wise, at or above it every component moves to the same
/// spreading-rate point of the box.
pub fn zero_patient_position(params: &CovoParams, dim: usize, rng: &mut RngState) -> Vec<f64> {
    let (l, u) = (params.lower, params.upper);
    let span = u - l;
    if rng.next_bool(params.p_travel) {
        let rate = draw_rate(params.ss_rate_range, rng);
        vec![l + span * rate; dim]
    } else if params.h_dist < params.threshold {
        (0..dim).map(|_| l + span * rng.next_unit()).collect()
    } else {
        let rate = draw_rate(params.s_rate_range, rng);
        vec![l + span * rate; dim]
    }
}

/// Multiplicative fitness-scaled move: each component gains or loses
/// `component * min(1, fit * p_die)` under an independent random sign, then
/// the result is clamped to the bounds.
pub fn update_individual(
    x_old: &[f64],
    fit: f64,
    params: &CovoParams,
    rng: &mut RngState,
) -> Vec<f64> {
    let cap = (fit * params.p_die).min(1.0);
    x_old
        .iter()
        .map(|&v| (v + rng.next_sign() * v * cap).clamp(params.lower, params.upper))
        .collect()
}

/// Generate newly infected candidates from every live infected individual.
///
/// An infected individual acts as a super-spreader with probability
/// `p_spreader`, contributing `super_contacts` contacts at the
/// super-spreading rate; otherwise it contributes one contact at the
/// ordinary rate. A contact is infected only when it violates the safe
/// distance or fails the isolation compliance draw. Accepted candidates are
/// evaluated immediately; evaluation stops when the budget runs out.
pub fn spread(
    state: &mut PopulationState,
    params: &CovoParams,
    spec: &ObjectiveSpec,
    rng: &mut RngState,
) -> Vec<Individual> {
    let parents: Vec<Vec<f64>> = state.infected.iter().map(|i| i.position.clone()).collect();
    let span = params.upper - params.lower;
    let mut accepted = Vec::new();
    for parent in &parents {
        let is_super = rng.next_bool(params.p_spreader);
        let (contacts, range) = if is_super {
            (params.super_contacts, params.ss_rate_range)
        } else {
            (1, params.s_rate_range)
        };
        for _ in 0..contacts {
            let rate = draw_rate(range, rng);
            let candidate: Vec<f64> = parent
                .iter()
                .map(|&v| (v + span * rate * rng.next_sign()).clamp(params.lower, params.upper))
                .collect();
            let dist = pair_distance(parent, &candidate).expect("equal lengths");
            let transmits = dist < params.delta || !rng.next_bool(params.p_isolation);
            if !transmits {
                continue;
            }
            match state.evaluate_tracked(spec, &candidate, rng) {
                EvalOutcome::Fit(fit) => accepted.push(Individual::evaluated(candidate, fit)),
                EvalOutcome::NonFinite => {
                    // Discard and regenerate once from a fresh uniform point.
                    let fresh = uniform_position(spec.dim(), params, rng);
                    if let EvalOutcome::Fit(fit) = state.evaluate_tracked(spec, &fresh, rng) {
                        accepted.push(Individual::evaluated(fresh, fit));
                    }
                }
                EvalOutcome::Exhausted => return accepted,
            }
        }
    }
    accepted
}

/// Apply the death, recovery, and re-infection transitions.
///
/// An infected individual whose error is at or below the current death
/// probability dies and is replaced by a fresh (not yet evaluated) random
/// individual. A surviving evaluated individual recovers with probability
/// equal to the current death rate. A previously recovered individual
/// re-enters the infected pool with the re-infection probability unless the
/// isolation draw keeps it recovered. Dead individuals never return.
pub fn classify_and_transition(
    state: &mut PopulationState,
    params: &CovoParams,
    rng: &mut RngState,
    counts: &mut TransitionCounts,
) {
    let p_die = state.p_die.value();
    let d_rate = state.d_rate.value();

    let mut staying_infected = Vec::with_capacity(state.infected.len());
    let mut newly_recovered = Vec::new();
    for mut ind in state.infected.drain(..) {
        match ind.fitness {
            Some(fit) if fit <= p_die => {
                let dim = ind.position.len();
                ind.status = Status::Dead;
                state.deaths.push(ind);
                counts.died += 1;
                staying_infected.push(Individual::infected(uniform_position(dim, params, rng)));
                counts.replacements += 1;
            }
            Some(_) if rng.next_bool(d_rate) => {
                ind.status = Status::Recovered;
                newly_recovered.push(ind);
                counts.newly_recovered += 1;
            }
            // Unevaluated individuals face no draws until they are scored.
            _ => staying_infected.push(ind),
        }
    }

    let mut staying_recovered = Vec::with_capacity(state.recovered.len());
    for mut ind in state.recovered.drain(..) {
        let reinfects = rng.next_bool(params.p_reinfected) && !rng.next_bool(params.p_isolation);
        if reinfects {
            ind.status = Status::Infected;
            staying_infected.push(ind);
            counts.reinfected += 1;
        } else {
            staying_recovered.push(ind);
        }
    }
    staying_recovered.extend(newly_recovered);

    state.infected = staying_infected;
    state.recovered = staying_recovered;
}

/// Drop individuals whose position lies within `eps` (L∞) of an
/// earlier-listed individual, preserving order otherwise.
pub fn dedupe(candidates: Vec<Individual>, eps: f64) -> Vec<Individual> {
    let mut kept: Vec<Individual> = Vec::with_capacity(candidates.len());
    'next: for cand in candidates {
        for k in &kept {
            if linf_within(&k.position, &cand.position, eps) {
                continue 'next;
            }
        }
        kept.push(cand);
    }
    kept
}

fn linf_within(a: &[f64], b: &[f64], eps: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= eps)
}

/// Check the stop conditions in priority order: budget, stagnation,
/// extinction.
pub fn should_terminate(state: &PopulationState, params: &CovoParams) -> Option<Termination> {
    if state.iteration >= params.max_iter || state.budget_exhausted() {
        return Some(Termination::BudgetExhausted);
    }
    if state.stagnation_counter >= params.stagnation_k {
        return Some(Termination::Stagnation);
    }
    let reinfection_possible =
        !state.recovered.is_empty() && params.p_reinfected > 0.0 && params.p_isolation < 1.0;
    if state.infected.is_empty() && !reinfection_possible {
        return Some(Termination::PopulationExtinct);
    }
    None
}

/// Draw the initial population, screen it with opposition learning, and
/// advance the chaotic parameters one step.
///
/// For each of the N uniform draws the bound-reflected point is evaluated
/// too and the fitter of the pair is kept, so the counter reads 2N
/// evaluations afterwards.
pub fn init_population(
    params: &CovoParams,
    spec: &ObjectiveSpec,
    rng: &mut RngState,
) -> Result<PopulationState> {
    params.validate()?;
    let dim = spec.dim();
    let mut state = PopulationState {
        infected: Vec::with_capacity(params.population),
        recovered: Vec::new(),
        deaths: Vec::new(),
        best: Individual::evaluated(Vec::new(), f64::INFINITY),
        iteration: 0,
        evals: 0,
        stagnation_counter: 0,
        p_die: ChaoticMapState::new(params.p_die, params.chaos_b, params.chaos_p)
            .map_err(|e| Error::InvalidArgument(e.to_string()))?,
        d_rate: ChaoticMapState::new(params.d_rate, params.chaos_b, params.chaos_p)
            .map_err(|e| Error::InvalidArgument(e.to_string()))?,
        max_evals: params.max_evals,
        notes: Vec::new(),
    };

    for _ in 0..params.population {
        let pos = uniform_position(dim, params, rng);
        let opp = opposition(&pos, params.lower, params.upper)?;
        let fit_pos = state.evaluate_tracked(spec, &pos, rng);
        let fit_opp = state.evaluate_tracked(spec, &opp, rng);
        let chosen = match (fit_pos, fit_opp) {
            (EvalOutcome::Fit(a), EvalOutcome::Fit(b)) => {
                if b < a {
                    Individual::evaluated(opp, b)
                } else {
                    Individual::evaluated(pos, a)
                }
            }
            (EvalOutcome::Fit(a), _) => Individual::evaluated(pos, a),
            (_, EvalOutcome::Fit(b)) => Individual::evaluated(opp, b),
            // Budget too small to score the pair, or both sides non-finite:
            // keep the raw point unevaluated.
            _ => Individual::infected(pos),
        };
        state.infected.push(chosen);
    }

    state.p_die.step();
    state.d_rate.step();
    Ok(state)
}
