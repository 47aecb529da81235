//! The optimizer: population initialization with opposition screening,
//! disease propagation gated by the social-distancing operator,
//! fitness-scaled updates, death/recovery bookkeeping, and termination.

mod ops;
mod params;
mod population;
mod run;

pub use ops::{
    classify_and_transition, dedupe, init_population, pair_distance, should_terminate,
    social_distance, spread, update_individual, zero_patient_position, Termination,
    STAGNATION_EPS,
};
pub use params::CovoParams;
pub use population::{Individual, PopulationState, Status, TransitionCounts};
pub use run::{run, RunResult, TracePoint};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::benchmarks::{BenchmarkId, ObjectiveSpec};
    use crate::rng::RngState;
    use approx::assert_abs_diff_eq;

    fn f1(dim: usize) -> ObjectiveSpec {
        ObjectiveSpec::benchmark(BenchmarkId::F1, dim).unwrap()
    }

    #[test]
    fn pair_distance_examples() {
        assert_eq!(pair_distance(&[1.0, 2.0], &[1.0, 2.0]).unwrap(), 0.0);
        assert_eq!(pair_distance(&[0.0, 0.0], &[3.0, 4.0]).unwrap(), 5.0);
        assert_eq!(
            pair_distance(&[1.0, -2.0], &[4.0, 6.0]).unwrap(),
            pair_distance(&[4.0, 6.0], &[1.0, -2.0]).unwrap()
        );
        assert!(pair_distance(&[1.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn social_distance_examples() {
        // Shortfall branch with the published safe distance.
        assert_abs_diff_eq!(social_distance(0.2, 0.41466), 0.21466, epsilon = 1e-12);
        assert_eq!(social_distance(0.9, 0.41466), 0.9);
        // The boundary uses the pass-through branch.
        assert_eq!(social_distance(0.41466, 0.41466), 0.41466);
        for i in 0..1000 {
            let dist = i as f64 * 0.01;
            assert!(social_distance(dist, 0.97248) >= 0.0);
        }
    }

    #[test]
    fn zero_patient_branches() {
        // Travel branch: every component at the super-spreading point.
        let mut p = CovoParams::table_ii();
        p.p_travel = 1.0;
        let x = zero_patient_position(&p, 4, &mut RngState::new(1));
        let expected = -100.0 + 200.0 * 0.80138;
        for v in &x {
            assert_abs_diff_eq!(*v, expected, epsilon = 1e-9);
            assert_abs_diff_eq!(*v, 60.276, epsilon = 1e-9);
        }

        // Stay-home branch above the threshold: the spreading-rate point.
        let mut p = CovoParams::table_ii();
        p.p_travel = 0.0;
        let x = zero_patient_position(&p, 3, &mut RngState::new(2));
        for v in &x {
            assert_abs_diff_eq!(*v, -28.5, epsilon = 1e-9);
        }

        // Stay-home branch below the threshold: fresh uniform components.
        let mut p = CovoParams::table_ii();
        p.p_travel = 0.0;
        p.h_dist = 0.1;
        let x = zero_patient_position(&p, 16, &mut RngState::new(3));
        assert!(x.iter().all(|v| (-100.0..100.0).contains(v)));
        assert!(
            x.windows(2).any(|w| w[0] != w[1]),
            "uniform branch should not produce a constant vector"
        );
    }

    #[test]
    fn update_individual_matches_formula() {
        // Find a seed whose first two sign draws are (+, -) and check the
        // worked example x = (10, -10), fit*p_die = 0.01 -> (10.1, -9.9).
        let mut p = CovoParams::table_ii();
        p.p_die = 0.01;
        let seed = (0..)
            .find(|&s| {
                let mut rng = RngState::new(s);
                rng.next_sign() == 1.0 && rng.next_sign() == -1.0
            })
            .unwrap();
        let got = update_individual(&[10.0, -10.0], 1.0, &p, &mut RngState::new(seed));
        assert_abs_diff_eq!(got[0], 10.1, epsilon = 1e-12);
        assert_abs_diff_eq!(got[1], -9.9, epsilon = 1e-12);
    }

    #[test]
    fn update_individual_zero_fit_is_identity() {
        let p = CovoParams::table_ii();
        let x = [3.25, -8.5, 0.0];
        let got = update_individual(&x, 0.0, &p, &mut RngState::new(9));
        assert_eq!(got, x.to_vec());
    }

    #[test]
    fn update_individual_caps_and_clamps() {
        let mut p = CovoParams::table_ii();
        p.p_die = 1.0;
        // fit * p_die >> 1: the step factor caps at 1, so a component at the
        // upper bound either doubles (clamped back) or zeroes.
        for seed in 0..32 {
            let got = update_individual(&[100.0, -100.0], 1e6, &p, &mut RngState::new(seed));
            for v in &got {
                assert!((-100.0..=100.0).contains(v));
                assert!(*v == 0.0 || v.abs() == 100.0);
            }
        }
    }

    #[test]
    fn init_population_contract() {
        let spec = f1(10);
        let p = CovoParams::table_ii();
        let state = init_population(&p, &spec, &mut RngState::new(7)).unwrap();
        assert_eq!(state.infected.len(), 10);
        assert_eq!(state.evals, 20);
        let best = state.best_error();
        for ind in &state.infected {
            assert!(best <= ind.fit());
        }

        let again = init_population(&p, &spec, &mut RngState::new(7)).unwrap();
        for (a, b) in state.infected.iter().zip(&again.infected) {
            assert_eq!(a.position, b.position);
            assert_eq!(a.fitness, b.fitness);
        }
    }

    #[test]
    fn opposition_screening_never_worsens_initial_elite() {
        let spec = f1(10);
        let p = CovoParams::table_ii();
        for seed in 0..100 {
            // Replay the raw uniform draws: positions are drawn before their
            // opposites are considered, and the sphere consumes no rng.
            let mut replay = RngState::new(seed);
            let mut raw_best = f64::INFINITY;
            for _ in 0..p.population {
                let pos: Vec<f64> = (0..10)
                    .map(|_| p.lower + (p.upper - p.lower) * replay.next_unit())
                    .collect();
                let err = spec.error_of(spec.evaluate_noiseless(&pos).unwrap());
                raw_best = raw_best.min(err);
            }
            let state = init_population(&p, &spec, &mut RngState::new(seed)).unwrap();
            assert!(
                state.best_error() <= raw_best,
                "seed {seed}: screened elite {} worse than raw elite {raw_best}",
                state.best_error()
            );
        }
    }

    #[test]
    fn spread_contact_counts() {
        let spec = f1(4);
        // Force acceptance: no isolation compliance.
        let mut p = CovoParams::table_ii();
        p.p_isolation = 0.0;

        // One ordinary spreader -> exactly one candidate.
        p.p_spreader = 0.0;
        let mut state = init_population(&p, &spec, &mut RngState::new(1)).unwrap();
        state.infected.truncate(1);
        let out = spread(&mut state, &p, &spec, &mut RngState::new(2));
        assert_eq!(out.len(), 1);

        // One super-spreader -> fifteen candidates.
        p.p_spreader = 1.0;
        let mut state = init_population(&p, &spec, &mut RngState::new(1)).unwrap();
        state.infected.truncate(1);
        let out = spread(&mut state, &p, &spec, &mut RngState::new(2));
        assert_eq!(out.len(), 15);
        for ind in &out {
            assert!(ind.position.iter().all(|v| (-100.0..=100.0).contains(v)));
            assert!(ind.fitness.is_some());
        }
    }

    #[test]
    fn spread_isolation_blocks_distant_contacts() {
        let spec = f1(4);
        let mut p = CovoParams::table_ii();
        // Full compliance and a tiny safe distance: candidates sit far from
        // their parents (rate * span >> delta), so nothing transmits.
        p.p_isolation = 1.0;
        p.p_spreader = 0.0;
        p.delta = 1e-9;
        let mut state = init_population(&p, &spec, &mut RngState::new(1)).unwrap();
        let out = spread(&mut state, &p, &spec, &mut RngState::new(2));
        assert!(out.is_empty());
    }

    #[test]
    fn classify_transitions() {
        let spec = f1(3);
        let mut p = CovoParams::table_ii();
        p.p_reinfected = 0.0;
        let mut state = init_population(&p, &spec, &mut RngState::new(4)).unwrap();
        // Death probability is an iterate in (0,1); fitnesses far above it
        // mean nobody dies.
        state.recovered.push(Individual {
            position: vec![1.0, 1.0, 1.0],
            fitness: Some(3.0),
            status: Status::Recovered,
        });
        for ind in &mut state.infected {
            ind.fitness = Some(10.0 + state.p_die.value());
        }
        let before_recovered_total = 1;
        let mut counts = TransitionCounts {
            infected_before: state.infected.len(),
            recovered_before: before_recovered_total,
            ..TransitionCounts::default()
        };
        let mut rng = RngState::new(5);
        classify_and_transition(&mut state, &p, &mut rng, &mut counts);
        assert_eq!(counts.died, 0);
        assert!(state.deaths.is_empty());
        assert_eq!(counts.reinfected, 0);

        // Forced re-infection: everyone recovered re-enters.
        let mut p = CovoParams::table_ii();
        p.p_reinfected = 1.0;
        p.p_isolation = 0.0;
        let mut state = init_population(&p, &spec, &mut RngState::new(4)).unwrap();
        state.infected.clear();
        for _ in 0..5 {
            state.recovered.push(Individual {
                position: vec![0.5, 0.5, 0.5],
                fitness: Some(0.75),
                status: Status::Recovered,
            });
        }
        let mut counts = TransitionCounts::default();
        classify_and_transition(&mut state, &p, &mut rng, &mut counts);
        assert_eq!(counts.reinfected, 5);
        assert!(state.recovered.is_empty());
        assert_eq!(state.infected.len(), 5);
        assert!(state
            .infected
            .iter()
            .all(|i| i.status == Status::Infected));
    }

    #[test]
    fn dead_individuals_are_replaced() {
        let spec = f1(3);
        let p = CovoParams::table_ii();
        let mut state = init_population(&p, &spec, &mut RngState::new(4)).unwrap();
        let n = state.infected.len();
        // Everyone's error sits below the death probability: all die.
        for ind in &mut state.infected {
            ind.fitness = Some(state.p_die.value() / 2.0);
        }
        let mut counts = TransitionCounts::default();
        classify_and_transition(&mut state, &p, &mut RngState::new(6), &mut counts);
        assert_eq!(counts.died, n);
        assert_eq!(counts.replacements, n);
        assert_eq!(state.deaths.len(), n);
        assert_eq!(state.infected.len(), n);
        assert!(state.infected.iter().all(|i| i.fitness.is_none()));
        assert!(state.deaths.iter().all(|i| i.status == Status::Dead));
    }

    #[test]
    fn dedupe_examples() {
        let mk = |pos: Vec<f64>| Individual::evaluated(pos, 1.0);
        let out = dedupe(vec![mk(vec![1.0, 2.0]), mk(vec![1.0, 2.0])], 1e-9);
        assert_eq!(out.len(), 1);

        let eps = 0.25;
        let out = dedupe(vec![mk(vec![0.0]), mk(vec![2.0 * eps])], eps);
        assert_eq!(out.len(), 2);

        let out = dedupe(Vec::new(), 0.5);
        assert!(out.is_empty());
    }

    #[test]
    fn termination_conditions() {
        let spec = f1(3);
        let mut p = CovoParams::table_ii();
        let state = init_population(&p, &spec, &mut RngState::new(1)).unwrap();
        assert_eq!(should_terminate(&state, &p), None);

        p.max_iter = 0;
        assert_eq!(
            should_terminate(&state, &p),
            Some(Termination::BudgetExhausted)
        );
        p.max_iter = 1000;

        let mut stagnant = state.clone();
        stagnant.stagnation_counter = p.stagnation_k;
        assert_eq!(
            should_terminate(&stagnant, &p),
            Some(Termination::Stagnation)
        );

        let mut extinct = state.clone();
        extinct.infected.clear();
        assert_eq!(
            should_terminate(&extinct, &p),
            Some(Termination::PopulationExtinct)
        );
        // With recovered individuals and re-infection possible, not extinct.
        extinct.recovered.push(Individual {
            position: vec![0.0; 3],
            fitness: Some(0.0),
            status: Status::Recovered,
        });
        assert_eq!(should_terminate(&extinct, &p), None);
        let mut no_reinfect = p.clone();
        no_reinfect.p_reinfected = 0.0;
        assert_eq!(
            should_terminate(&extinct, &no_reinfect),
            Some(Termination::PopulationExtinct)
        );
    }

    #[test]
    fn run_with_zero_budget_returns_screened_init() {
        let spec = f1(10);
        let mut p = CovoParams::table_ii();
        p.max_iter = 0;
        let result = run(&spec, &p, 11).unwrap();
        assert_eq!(result.trace.len(), 1);
        assert_eq!(result.trace[0].evals, 20);
        assert_eq!(result.best_error, result.trace[0].best_error);
        assert_eq!(result.termination, Termination::BudgetExhausted);
    }

    #[test]
    fn run_is_deterministic_and_monotone() {
        let spec = f1(10);
        let mut p = CovoParams::table_ii();
        p.max_evals = Some(5_000);
        p.max_iter = 10_000;
        let a = run(&spec, &p, 99).unwrap();
        let b = run(&spec, &p, 99).unwrap();
        assert_eq!(a.best_error.to_bits(), b.best_error.to_bits());
        assert_eq!(a.best_position, b.best_position);
        assert_eq!(a.termination, b.termination);
        assert_eq!(a.trace.len(), b.trace.len());
        for (x, y) in a.trace.iter().zip(&b.trace) {
            assert_eq!(x.iteration, y.iteration);
            assert_eq!(x.evals, y.evals);
            assert_eq!(x.best_error.to_bits(), y.best_error.to_bits());
        }
        assert_eq!(a.transitions, b.transitions);

        // Elitism: trace is non-increasing and ends at the reported best.
        for w in a.trace.windows(2) {
            assert!(w[1].best_error <= w[0].best_error);
        }
        assert_eq!(a.trace.last().unwrap().best_error, a.best_error);
        // Final best is no worse than the screened initial population.
        assert!(a.best_error <= a.trace[0].best_error);
    }

    #[test]
    fn run_respects_eval_budget_and_balances_transitions() {
        let spec = f1(6);
        let mut p = CovoParams::table_ii();
        p.max_evals = Some(3_000);
        p.max_iter = 10_000;
        for seed in [1u64, 17, 400] {
            let r = run(&spec, &p, seed).unwrap();
            for t in &r.trace {
                assert!(t.evals <= 3_000);
            }
            let mut prev_deaths = 0usize;
            for c in &r.transitions {
                assert!(c.balances(), "unbalanced transition: {c:?}");
                assert!(c.deaths_total >= prev_deaths);
                prev_deaths = c.deaths_total;
            }
        }
    }
}
