use crate::benchmarks::ObjectiveSpec;
use crate::error::{Error, Result};
use crate::rng::{DEFAULT_CHAOS_B, DEFAULT_CHAOS_P};

/// Every tunable of one optimizer run.
///
/// [`table_i`](CovoParams::table_i) and [`table_ii`](CovoParams::table_ii)
/// load the two published presets; `Default` is the second preset. Rate
/// ranges may be degenerate (`lo == hi`) to pin a rate to a fixed value
/// instead of drawing it fresh per use.
#[derive(Clone, Debug)]
pub struct CovoParams {
    /// Population size N.
    pub population: usize,
    /// Ordinary spreading-rate range, nominally inside (0, 0.5).
    pub s_rate_range: (f64, f64),
    /// Super-spreading-rate range, nominally inside (0.5, 1).
    pub ss_rate_range: (f64, f64),
    /// Probability that the zero patient travels.
    pub p_travel: f64,
    /// Initial death probability; evolved by the chaotic recurrence.
    pub p_die: f64,
    /// Initial death rate; evolved by the chaotic recurrence and reused as
    /// the per-iteration recovery probability.
    pub d_rate: f64,
    /// Safe-distance constant Δ gating transmission between solutions.
    pub delta: f64,
    /// Scalar social-distancing parameter gating the zero-patient branch.
    pub h_dist: f64,
    /// Threshold T compared against `h_dist`.
    pub threshold: f64,
    /// Lower bound of the search domain.
    pub lower: f64,
    /// Upper bound of the search domain.
    pub upper: f64,
    /// Probability that an infected individual acts as a super-spreader.
    pub p_spreader: f64,
    /// Contacts one super-spreader generates per iteration.
    pub super_contacts: usize,
    /// Probability that a recovered individual is re-infected.
    pub p_reinfected: f64,
    /// Probability that a contact complies with isolation.
    pub p_isolation: f64,
    /// Travelling rate. Recorded for completeness; no update rule uses it.
    pub t_rate: f64,
    /// Iteration budget.
    pub max_iter: usize,
    /// Optional evaluation budget; `None` leaves evaluations uncapped.
    pub max_evals: Option<u64>,
    /// Iterations without improvement before the stagnation stop fires.
    pub stagnation_k: usize,
    /// L∞ radius below which two individuals count as duplicates.
    pub dedupe_eps: f64,
    /// Cap on the live infected pool; the fittest survive an overflow.
    pub max_infected: usize,
    /// Chaotic-map constant b.
    pub chaos_b: f64,
    /// Chaotic-map constant p.
    pub chaos_p: f64,
}

impl CovoParams {
    /// First published preset: chaotic seeds 0.43597/0.13955, Δ = 0.97248,
    /// bounds [-10, 10], rates drawn fresh from their nominal ranges, and a
    /// fair travel coin.
    pub fn table_i() -> Self {
        Self {
            population: 10,
            s_rate_range: (0.0, 0.5),
            ss_rate_range: (0.5, 1.0),
            p_travel: 0.5,
            p_die: 0.43597,
            d_rate: 0.13955,
            delta: 0.97248,
            h_dist: 13.77323,
            threshold: 0.5,
            lower: -10.0,
            upper: 10.0,
            ..Self::common()
        }
    }

    /// Second published preset: N = 10, fixed rates 0.3575/0.80138, no
    /// travel, chaotic seeds 1/0.888557, Δ = 0.41466, bounds [-100, 100].
    pub fn table_ii() -> Self {
        Self {
            population: 10,
            s_rate_range: (0.3575, 0.3575),
            ss_rate_range: (0.80138, 0.80138),
            p_travel: 0.0,
            p_die: 1.0,
            d_rate: 0.888557,
            delta: 0.41466,
            h_dist: 0.87306,
            threshold: 0.5,
            lower: -100.0,
            upper: 100.0,
            ..Self::common()
        }
    }

    /// Loads a preset by name (`"tableI"` / `"tableII"`, case-insensitive).
    pub fn preset(name: &str) -> Result<Self> {
        match name.trim().to_ascii_lowercase().as_str() {
            "tablei" | "table_i" | "table-i" => Ok(Self::table_i()),
            "tableii" | "table_ii" | "table-ii" => Ok(Self::table_ii()),
            other => Err(Error::InvalidArgument(format!(
                "unknown preset {other:?}; expected tableI or tableII"
            ))),
        }
    }

    fn common() -> Self {
        Self {
            population: 10,
            s_rate_range: (0.0, 0.5),
            ss_rate_range: (0.5, 1.0),
            p_travel: 0.0,
            p_die: 0.5,
            d_rate: 0.5,
            delta: 1.0,
            h_dist: 1.0,
            threshold: 0.5,
            lower: -100.0,
            upper: 100.0,
            p_spreader: 0.5,
            super_contacts: 15,
            p_reinfected: 0.1,
            p_isolation: 0.5,
            t_rate: 0.5,
            max_iter: 1000,
            max_evals: None,
            stagnation_k: 50,
            dedupe_eps: 1e-9,
            max_infected: 100,
            chaos_b: DEFAULT_CHAOS_B,
            chaos_p: DEFAULT_CHAOS_P,
        }
    }

    /// Copy of the parameters with the search bounds replaced by the
    /// objective's domain. Presets carry nominal bounds, but the objective
    /// owns the domain the run actually searches.
    pub fn for_bounds(&self, spec: &ObjectiveSpec) -> Self {
        let (lower, upper) = spec.bounds();
        Self {
            lower,
            upper,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        fn probability(name: &str, v: f64) -> Result<()> {
            if (0.0..=1.0).contains(&v) {
                Ok(())
            } else {
                Err(Error::InvalidArgument(format!(
                    "{name} must be a probability in [0, 1], got {v}"
                )))
            }
        }
        if self.population < 2 {
            return Err(Error::InvalidArgument(format!(
                "population must be at least 2, got {}",
                self.population
            )));
        }
        if !(self.threshold > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "threshold must be positive, got {}",
                self.threshold
            )));
        }
        if !(self.lower < self.upper) || !self.lower.is_finite() || !self.upper.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "bounds must satisfy lower < upper and be finite, got [{}, {}]",
                self.lower, self.upper
            )));
        }
        if !(self.delta > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "delta must be positive, got {}",
                self.delta
            )));
        }
        probability("p_travel", self.p_travel)?;
        probability("p_spreader", self.p_spreader)?;
        probability("p_reinfected", self.p_reinfected)?;
        probability("p_isolation", self.p_isolation)?;
        for (name, (lo, hi)) in [
            ("s_rate_range", self.s_rate_range),
            ("ss_rate_range", self.ss_rate_range),
        ] {
            if !lo.is_finite() || !hi.is_finite() || lo > hi {
                return Err(Error::InvalidArgument(format!(
                    "{name} must be a finite interval with lo <= hi, got [{lo}, {hi}]"
                )));
            }
        }
        if self.super_contacts == 0 {
            return Err(Error::InvalidArgument(
                "super_contacts must be positive".into(),
            ));
        }
        if self.stagnation_k == 0 {
            return Err(Error::InvalidArgument(
                "stagnation_k must be positive".into(),
            ));
        }
        if !(self.dedupe_eps >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "dedupe_eps must be non-negative, got {}",
                self.dedupe_eps
            )));
        }
        if self.max_infected == 0 {
            return Err(Error::InvalidArgument(
                "max_infected must be positive".into(),
            ));
        }
        for (name, v) in [
            ("p_die", self.p_die),
            ("d_rate", self.d_rate),
            ("h_dist", self.h_dist),
            ("t_rate", self.t_rate),
            ("chaos_b", self.chaos_b),
            ("chaos_p", self.chaos_p),
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

impl Default for CovoParams {
    fn default() -> Self {
        Self::table_ii()
    }
}
