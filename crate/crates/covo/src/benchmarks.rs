//! The thirteen standard numerical benchmark objectives with their
//! canonical bounds, evaluators, and known-optimum metadata, plus support
//! for registering application objectives at runtime.
//!
//! Fitness throughout the crate is the error `f(x) - f*` relative to the
//! known optimum, so every objective here carries `f*` alongside its
//! evaluator.

use std::f64::consts::{E, PI, TAU};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::rng::RngState;

/// Landscape classification of an objective.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Modality {
    Unimodal,
    Multimodal,
    Step,
    Noisy,
}

/// Identifier of one of the thirteen standard benchmark functions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BenchmarkId {
    F1,
    F2,
    F3,
    F4,
    F5,
    F6,
    F7,
    F8,
    F9,
    F10,
    F11,
    F12,
    F13,
}

impl BenchmarkId {
    /// All suite members in order.
    pub const ALL: [BenchmarkId; 13] = [
        BenchmarkId::F1,
        BenchmarkId::F2,
        BenchmarkId::F3,
        BenchmarkId::F4,
        BenchmarkId::F5,
        BenchmarkId::F6,
        BenchmarkId::F7,
        BenchmarkId::F8,
        BenchmarkId::F9,
        BenchmarkId::F10,
        BenchmarkId::F11,
        BenchmarkId::F12,
        BenchmarkId::F13,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            BenchmarkId::F1 => "F1",
            BenchmarkId::F2 => "F2",
            BenchmarkId::F3 => "F3",
            BenchmarkId::F4 => "F4",
            BenchmarkId::F5 => "F5",
            BenchmarkId::F6 => "F6",
            BenchmarkId::F7 => "F7",
            BenchmarkId::F8 => "F8",
            BenchmarkId::F9 => "F9",
            BenchmarkId::F10 => "F10",
            BenchmarkId::F11 => "F11",
            BenchmarkId::F12 => "F12",
            BenchmarkId::F13 => "F13",
        }
    }

    /// Parses `"F1"`..`"F13"`, case-insensitively.
    pub fn parse(s: &str) -> Option<BenchmarkId> {
        BenchmarkId::ALL
            .iter()
            .copied()
            .find(|id| id.name().eq_ignore_ascii_case(s.trim()))
    }

    /// Canonical symmetric search bounds.
    pub fn bounds(&self) -> (f64, f64) {
        match self {
            BenchmarkId::F1 | BenchmarkId::F3 | BenchmarkId::F4 | BenchmarkId::F6 => {
                (-100.0, 100.0)
            }
            BenchmarkId::F2 => (-10.0, 10.0),
            BenchmarkId::F5 => (-30.0, 30.0),
            BenchmarkId::F7 => (-1.28, 1.28),
            BenchmarkId::F8 => (-500.0, 500.0),
            BenchmarkId::F9 => (-5.12, 5.12),
            BenchmarkId::F10 => (-32.0, 32.0),
            BenchmarkId::F11 => (-600.0, 600.0),
            BenchmarkId::F12 | BenchmarkId::F13 => (-50.0, 50.0),
        }
    }

    pub fn modality(&self) -> Modality {
        match self {
            BenchmarkId::F1
            | BenchmarkId::F2
            | BenchmarkId::F3
            | BenchmarkId::F4
            | BenchmarkId::F5 => Modality::Unimodal,
            BenchmarkId::F6 => Modality::Step,
            BenchmarkId::F7 => Modality::Noisy,
            _ => Modality::Multimodal,
        }
    }

    /// Known optimizer at dimension `dim`.
    fn optimizer(&self, dim: usize) -> Vec<f64> {
        let v = match self {
            BenchmarkId::F5 | BenchmarkId::F13 => 1.0,
            BenchmarkId::F8 => SCHWEFEL_OPTIMIZER,
            BenchmarkId::F12 => -1.0,
            _ => 0.0,
        };
        vec![v; dim]
    }
}

/// Per-dimension optimizer of the Schwefel objective (F8).
const SCHWEFEL_OPTIMIZER: f64 = 420.9687;

/// Parameters of the boundary-penalty term `u` used by F12 and F13.
#[derive(Clone, Copy, Debug)]
pub struct PenaltyParams {
    pub a: f64,
    pub k: f64,
    pub m: f64,
}

/// Boundary penalty: `k(x-a)^m` beyond `a`, `k(-x-a)^m` below `-a`, zero in
/// the dead zone `[-a, a]`.
pub fn penalty_u(x: f64, p: &PenaltyParams) -> f64 {
    if x > p.a {
        p.k * (x - p.a).powf(p.m)
    } else if x < -p.a {
        p.k * (-x - p.a).powf(p.m)
    } else {
        0.0
    }
}

enum EvalKind {
    Benchmark(BenchmarkId),
    Custom(Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>),
}

impl Clone for EvalKind {
    fn clone(&self) -> Self {
        match self {
            EvalKind::Benchmark(id) => EvalKind::Benchmark(*id),
            EvalKind::Custom(f) => EvalKind::Custom(Arc::clone(f)),
        }
    }
}

/// One objective: dimension, bounds, evaluator, and known-optimum metadata.
///
/// Immutable and freely shareable; evaluation is reentrant given distinct
/// [`RngState`] instances.
#[derive(Clone)]
pub struct ObjectiveSpec {
    name: String,
    dim: usize,
    lower: f64,
    upper: f64,
    known_optimum: f64,
    known_optimizer: Option<Vec<f64>>,
    modality: Modality,
    kind: EvalKind,
}

impl fmt::Debug for ObjectiveSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ObjectiveSpec")
            .field("name", &self.name)
            .field("dim", &self.dim)
            .field("bounds", &(self.lower, self.upper))
            .field("known_optimum", &self.known_optimum)
            .field("modality", &self.modality)
            .finish()
    }
}

impl ObjectiveSpec {
    /// A suite member at dimension `dim` (at least 2).
    ///
    /// `f*` is 0 for every function except F8, whose optimum is the value
    /// the evaluator takes at the all-`420.9687` optimizer (a small residue
    /// left by the additive offset constant).
    pub fn benchmark(id: BenchmarkId, dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidArgument(format!(
                "benchmark dimension must be at least 2, got {dim}"
            )));
        }
        let (lower, upper) = id.bounds();
        let optimizer = id.optimizer(dim);
        let known_optimum = match id {
            BenchmarkId::F8 => eval_benchmark(id, &optimizer, 0.0),
            _ => 0.0,
        };
        Ok(Self {
            name: id.name().to_string(),
            dim,
            lower,
            upper,
            known_optimum,
            known_optimizer: Some(optimizer),
            modality: id.modality(),
            kind: EvalKind::Benchmark(id),
        })
    }

    /// Registers an application objective with explicit metadata.
    pub fn custom<F>(
        name: impl Into<String>,
        dim: usize,
        lower: f64,
        upper: f64,
        known_optimum: f64,
        evaluator: F,
    ) -> Result<Self>
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        if dim == 0 {
            return Err(Error::InvalidArgument("dimension must be positive".into()));
        }
        if !(lower < upper) || !lower.is_finite() || !upper.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "bounds must satisfy lower < upper and be finite, got [{lower}, {upper}]"
            )));
        }
        Ok(Self {
            name: name.into(),
            dim,
            lower,
            upper,
            known_optimum,
            known_optimizer: None,
            modality: Modality::Multimodal,
            kind: EvalKind::Custom(Arc::new(evaluator)),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bounds(&self) -> (f64, f64) {
        (self.lower, self.upper)
    }

    pub fn known_optimum(&self) -> f64 {
        self.known_optimum
    }

    pub fn known_optimizer(&self) -> Option<&[f64]> {
        self.known_optimizer.as_deref()
    }

    pub fn modality(&self) -> Modality {
        self.modality
    }

    /// Objective value at `x`. The quartic-noise objective (F7) draws its
    /// additive noise term from `rng`, one draw per evaluation; every other
    /// objective leaves `rng` untouched.
    pub fn evaluate(&self, x: &[f64], rng: &mut RngState) -> Result<f64> {
        self.check(x)?;
        Ok(match &self.kind {
            EvalKind::Benchmark(id) => {
                let noise = if *id == BenchmarkId::F7 {
                    rng.next_unit()
                } else {
                    0.0
                };
                eval_benchmark(*id, x, noise)
            }
            EvalKind::Custom(f) => f(x),
        })
    }

    /// Objective value with F7's noise term fixed to zero; identical to
    /// [`evaluate`](Self::evaluate) for every other objective.
    pub fn evaluate_noiseless(&self, x: &[f64]) -> Result<f64> {
        self.check(x)?;
        Ok(match &self.kind {
            EvalKind::Benchmark(id) => eval_benchmark(*id, x, 0.0),
            EvalKind::Custom(f) => f(x),
        })
    }

    /// Error relative to the known optimum: the quantity the optimizer
    /// minimizes.
    pub fn error_of(&self, f: f64) -> f64 {
        f - self.known_optimum
    }

    fn check(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.len(),
            });
        }
        for (j, &v) in x.iter().enumerate() {
            if !(self.lower <= v && v <= self.upper) {
                return Err(Error::InvalidArgument(format!(
                    "component {j} = {v} outside [{}, {}] for {}",
                    self.lower, self.upper, self.name
                )));
            }
        }
        Ok(())
    }
}

/// The full thirteen-function suite at dimension `dim`.
pub fn make_suite(dim: usize) -> Result<Vec<ObjectiveSpec>> {
    BenchmarkId::ALL
        .iter()
        .map(|&id| ObjectiveSpec::benchmark(id, dim))
        .collect()
}

fn eval_benchmark(id: BenchmarkId, x: &[f64], noise: f64) -> f64 {
    let d = x.len();
    match id {
        // Sphere.
        BenchmarkId::F1 => x.iter().map(|v| v * v).sum(),
        // Schwefel 2.22: sum of magnitudes plus product of magnitudes.
        BenchmarkId::F2 => {
            let s: f64 = x.iter().map(|v| v.abs()).sum();
            let p: f64 = x.iter().map(|v| v.abs()).product();
            s + p
        }
        // Schwefel 1.2: squared running sums.
        BenchmarkId::F3 => {
            let mut total = 0.0;
            let mut running = 0.0;
            for &v in x {
                running += v;
                total += running * running;
            }
            total
        }
        // Schwefel 2.21: largest magnitude.
        BenchmarkId::F4 => x.iter().fold(0.0f64, |m, v| m.max(v.abs())),
        // Rosenbrock.
        BenchmarkId::F5 => x
            .windows(2)
            .map(|w| 100.0 * (w[1] - w[0] * w[0]).powi(2) + (w[0] - 1.0).powi(2))
            .sum(),
        // De Jong step function.
        BenchmarkId::F6 => x
            .iter()
            .map(|v| {
                let t = (v + 0.5).floor();
                t * t
            })
            .sum(),
        // Quartic with additive noise.
        BenchmarkId::F7 => {
            x.iter()
                .enumerate()
                .map(|(i, v)| (i + 1) as f64 * v.powi(4))
                .sum::<f64>()
                + noise
        }
        // Schwefel.
        BenchmarkId::F8 => {
            418.9829 * d as f64
                - x.iter()
                    .map(|v| v * v.abs().sqrt().sin())
                    .sum::<f64>()
        }
        // Rastrigin.
        BenchmarkId::F9 => x
            .iter()
            .map(|v| v * v - 10.0 * (TAU * v).cos() + 10.0)
            .sum(),
        // Ackley.
        BenchmarkId::F10 => {
            let sq = x.iter().map(|v| v * v).sum::<f64>() / d as f64;
            let cs = x.iter().map(|v| (TAU * v).cos()).sum::<f64>() / d as f64;
            -20.0 * (-0.2 * sq.sqrt()).exp() - cs.exp() + 20.0 + E
        }
        // Griewank.
        BenchmarkId::F11 => {
            let s = x.iter().map(|v| v * v).sum::<f64>() / 4000.0;
            let p = x
                .iter()
                .enumerate()
                .map(|(i, v)| (v / ((i + 1) as f64).sqrt()).cos())
                .product::<f64>();
            s - p + 1.0
        }
        // Generalized penalized function 1.
        BenchmarkId::F12 => {
            let pen = PenaltyParams {
                a: 10.0,
                k: 100.0,
                m: 4.0,
            };
            let y = |v: f64| 1.0 + (v + 1.0) / 4.0;
            let mut s = 10.0 * (PI * y(x[0])).sin().powi(2);
            for i in 0..d - 1 {
                s += (y(x[i]) - 1.0).powi(2) * (1.0 + 10.0 * (PI * y(x[i + 1])).sin().powi(2));
            }
            s += (y(x[d - 1]) - 1.0).powi(2);
            PI / d as f64 * s + x.iter().map(|&v| penalty_u(v, &pen)).sum::<f64>()
        }
        // Generalized penalized function 2.
        BenchmarkId::F13 => {
            let pen = PenaltyParams {
                a: 5.0,
                k: 100.0,
                m: 4.0,
            };
            let mut s = (3.0 * PI * x[0]).sin().powi(2);
            for i in 0..d - 1 {
                s += (x[i] - 1.0).powi(2) * (1.0 + (3.0 * PI * x[i + 1]).sin().powi(2));
            }
            s += (x[d - 1] - 1.0).powi(2) * (1.0 + (TAU * x[d - 1]).sin().powi(2));
            0.1 * s + x.iter().map(|&v| penalty_u(v, &pen)).sum::<f64>()
        }
    }
}
