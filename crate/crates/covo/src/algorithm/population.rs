use crate::benchmarks::ObjectiveSpec;
use crate::rng::{ChaoticMapState, RngState};

/// Epidemiological status of a candidate solution.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Infected,
    Recovered,
    Dead,
}

/// One candidate solution: a position, its cached error relative to the
/// known optimum (absent until evaluated), and its status.
#[derive(Clone, Debug)]
pub struct Individual {
    pub position: Vec<f64>,
    pub fitness: Option<f64>,
    pub status: Status,
}

impl Individual {
    /// Fresh, not-yet-evaluated infected individual.
    pub fn infected(position: Vec<f64>) -> Self {
        Self {
            position,
            fitness: None,
            status: Status::Infected,
        }
    }

    /// Evaluated infected individual.
    pub fn evaluated(position: Vec<f64>, fitness: f64) -> Self {
        Self {
            position,
            fitness: Some(fitness),
            status: Status::Infected,
        }
    }

    /// Cached fitness. Panics if the individual was never evaluated; callers
    /// inside the run loop guarantee evaluation first.
    pub fn fit(&self) -> f64 {
        self.fitness.expect("individual queried before evaluation")
    }
}

/// The three sub-populations, the elite, and the run counters.
#[derive(Clone, Debug)]
pub struct PopulationState {
    pub infected: Vec<Individual>,
    pub recovered: Vec<Individual>,
    /// Dead individuals. They are retained but never re-enter the search.
    pub deaths: Vec<Individual>,
    /// Best-so-far individual; never discarded, so the best error is
    /// non-increasing across iterations.
    pub best: Individual,
    pub iteration: usize,
    pub evals: u64,
    pub stagnation_counter: usize,
    /// Death-probability recurrence state.
    pub p_die: ChaoticMapState,
    /// Death-rate recurrence state.
    pub d_rate: ChaoticMapState,
    /// Evaluation budget copied from the parameters at initialization.
    pub max_evals: Option<u64>,
    /// Rare-event log (non-finite objective values and their handling).
    pub notes: Vec<String>,
}

/// Outcome of one budget-aware tracked evaluation.
#[derive(Clone, Copy, Debug)]
pub(crate) enum EvalOutcome {
    /// Evaluated to a finite error.
    Fit(f64),
    /// The objective returned a non-finite value; the point must be discarded.
    NonFinite,
    /// The evaluation budget is exhausted; nothing was evaluated.
    Exhausted,
}

impl PopulationState {
    /// Current best error.
    pub fn best_error(&self) -> f64 {
        self.best.fit()
    }

    pub(crate) fn budget_exhausted(&self) -> bool {
        self.max_evals.is_some_and(|m| self.evals >= m)
    }

    /// Evaluates `pos`, charging the budget, updating the eval counter and
    /// the elite. A non-finite objective value is charged but reported so
    /// the caller can discard the point.
    pub(crate) fn evaluate_tracked(
        &mut self,
        spec: &ObjectiveSpec,
        pos: &[f64],
        rng: &mut RngState,
    ) -> EvalOutcome {
        if self.budget_exhausted() {
            return EvalOutcome::Exhausted;
        }
        let raw = spec
            .evaluate(pos, rng)
            .expect("positions are clamped into the objective domain");
        self.evals += 1;
        let err = spec.error_of(raw);
        if !err.is_finite() {
            self.notes.push(format!(
                "iteration {}: non-finite objective value discarded",
                self.iteration
            ));
            return EvalOutcome::NonFinite;
        }
        if err < self.best.fit() {
            self.best = Individual::evaluated(pos.to_vec(), err);
        }
        EvalOutcome::Fit(err)
    }
}

/// Per-iteration population accounting. The run records one entry per
/// iteration so tests can audit that transitions neither lose nor duplicate
/// individuals.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TransitionCounts {
    pub infected_before: usize,
    pub recovered_before: usize,
    /// Infected individuals that died this iteration.
    pub died: usize,
    /// Fresh random individuals generated in place of the dead.
    pub replacements: usize,
    /// Infected individuals that moved to the recovered pool.
    pub newly_recovered: usize,
    /// Recovered individuals that re-entered the infected pool.
    pub reinfected: usize,
    /// Newly infected candidates accepted during spreading.
    pub spawned: usize,
    /// Individuals dropped as near-duplicates.
    pub removed_duplicates: usize,
    /// Individuals dropped when the infected pool overflowed its cap.
    pub removed_overflow: usize,
    pub infected_after: usize,
    pub recovered_after: usize,
    /// Cumulative size of the death pool after this iteration.
    pub deaths_total: usize,
}

impl TransitionCounts {
    /// True when the infected/recovered deltas are fully explained by the
    /// recorded transitions.
    pub fn balances(&self) -> bool {
        let infected_expected = self.infected_before + self.replacements + self.reinfected
            - self.died
            - self.newly_recovered
            + self.spawned
            - self.removed_duplicates
            - self.removed_overflow;
        let recovered_expected = self.recovered_before + self.newly_recovered - self.reinfected;
        infected_expected == self.infected_after && recovered_expected == self.recovered_after
    }
}
