//! Signal-denoising application: synthesize an ECG-like source, contaminate
//! it with Gaussian noise through a 2x2 linear mixing, and recover it by
//! optimizing the unmixing matrix against the known source.
//!
//! The observation model is `Y = A * [S; N]` with S the unit-variance
//! source and N standard Gaussian noise. A candidate unmixing matrix W is
//! scored by the mean squared error between the best output channel of
//! `W * Y` (after least-squares scale alignment, which also resolves sign)
//! and the source.

use crate::algorithm::{self, CovoParams, RunResult};
use crate::benchmarks::ObjectiveSpec;
use crate::error::{Error, Result};
use crate::rng::RngState;

/// Sentinel fitness for unmixing matrices with non-finite entries.
pub const WORST_FITNESS: f64 = 1e18;

/// Search box half-width for each unmixing-matrix entry.
pub const UNMIX_BOUND: f64 = 10.0;

/// One Gaussian bump of the beat template, relative to the R peak.
#[derive(Clone, Copy, Debug)]
pub struct Wave {
    pub amplitude: f64,
    /// Center offset from the R peak in seconds.
    pub center_s: f64,
    /// Gaussian width (standard deviation) in seconds.
    pub width_s: f64,
}

/// Parameters of the synthetic ECG generator: five Gaussian bumps
/// (P, Q, R, S, T) repeated at the heart rate.
#[derive(Clone, Debug)]
pub struct EcgParams {
    pub sample_rate: f64,
    pub duration: f64,
    pub heart_rate: f64,
    pub waves: [Wave; 5],
}

impl Default for EcgParams {
    fn default() -> Self {
        Self {
            sample_rate: 250.0,
            duration: 4.0,
            heart_rate: 72.0,
            waves: [
                Wave { amplitude: 0.15, center_s: -0.20, width_s: 0.025 }, // P
                Wave { amplitude: -0.15, center_s: -0.03, width_s: 0.010 }, // Q
                Wave { amplitude: 1.20, center_s: 0.00, width_s: 0.012 },  // R
                Wave { amplitude: -0.25, center_s: 0.03, width_s: 0.010 }, // S
                Wave { amplitude: 0.35, center_s: 0.30, width_s: 0.050 },  // T
            ],
        }
    }
}

impl EcgParams {
    fn validate(&self) -> Result<()> {
        if !(self.sample_rate > 0.0) || !self.sample_rate.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "sample_rate must be positive, got {}",
                self.sample_rate
            )));
        }
        if !(self.duration > 0.0) || !self.duration.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "duration must be positive, got {}",
                self.duration
            )));
        }
        if !(self.heart_rate > 0.0) || !self.heart_rate.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "heart_rate must be positive, got {}",
                self.heart_rate
            )));
        }
        for w in &self.waves {
            if !(w.width_s > 0.0) || !w.amplitude.is_finite() || !w.center_s.is_finite() {
                return Err(Error::InvalidArgument(
                    "wave parameters must be finite with positive widths".into(),
                ));
            }
        }
        Ok(())
    }
}

/// Two-by-two mixing of the source with standard Gaussian noise.
#[derive(Clone, Copy, Debug)]
pub struct MixingModel {
    pub a: [[f64; 2]; 2],
}

impl Default for MixingModel {
    fn default() -> Self {
        // Well-conditioned rotation-like mixing with unit determinant.
        Self {
            a: [[0.8, 0.6], [-0.6, 0.8]],
        }
    }
}

impl MixingModel {
    pub fn det(&self) -> f64 {
        self.a[0][0] * self.a[1][1] - self.a[0][1] * self.a[1][0]
    }

    pub fn validate(&self) -> Result<()> {
        if self.a.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(
                "mixing matrix entries must be finite".into(),
            ));
        }
        if self.det().abs() <= 1e-6 {
            return Err(Error::InvalidArgument(format!(
                "mixing matrix is singular (det = {})",
                self.det()
            )));
        }
        Ok(())
    }

    /// Inverse of the mixing matrix.
    pub fn inverse(&self) -> Result<[[f64; 2]; 2]> {
        self.validate()?;
        let d = self.det();
        Ok([
            [self.a[1][1] / d, -self.a[0][1] / d],
            [-self.a[1][0] / d, self.a[0][0] / d],
        ])
    }
}

/// Outcome of one denoising run.
#[derive(Clone, Debug)]
pub struct DenoiseReport {
    /// MSE between the source and the reconstruction under the best W.
    pub mse_o_r: f64,
    /// MSE between the source and the (scale-aligned) first observed channel.
    pub mse_o_c: f64,
    pub best_w: [[f64; 2]; 2],
    pub run: RunResult,
}

/// Deterministic-for-seed synthetic ECG, z-normalized to zero mean and unit
/// (population) variance. Beat amplitudes carry a small seeded jitter.
pub fn synth_ecg(params: &EcgParams, rng: &mut RngState) -> Result<Vec<f64>> {
    params.validate()?;
    let n = (params.sample_rate * params.duration).round() as usize;
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "signal needs at least 2 samples, got {n}"
        )));
    }
    let beat = 60.0 / params.heart_rate;
    let mut signal = vec![0.0f64; n];
    // One extra beat on each side keeps the window edges periodic.
    let beats = (params.duration / beat).ceil() as i64 + 1;
    for k in -1..=beats {
        let t_beat = k as f64 * beat;
        let jitter = 0.98 + 0.04 * rng.next_unit();
        for w in &params.waves {
            let center = t_beat + w.center_s;
            let inv_two_w2 = 1.0 / (2.0 * w.width_s * w.width_s);
            for (i, s) in signal.iter_mut().enumerate() {
                let dt = i as f64 / params.sample_rate - center;
                *s += w.amplitude * jitter * (-dt * dt * inv_two_w2).exp();
            }
        }
    }

    let mean = signal.iter().sum::<f64>() / n as f64;
    let var = signal.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n as f64;
    if var <= 0.0 {
        return Err(Error::InvalidArgument(
            "generated signal is constant; cannot normalize".into(),
        ));
    }
    let scale = var.sqrt();
    for v in &mut signal {
        *v = (*v - mean) / scale;
    }
    Ok(signal)
}

/// Mix the source with freshly drawn standard Gaussian noise:
/// returns the two observed channels `Y = A * [S; N]` and the noise.
pub fn contaminate(
    source: &[f64],
    model: &MixingModel,
    rng: &mut RngState,
) -> Result<([Vec<f64>; 2], Vec<f64>)> {
    model.validate()?;
    let noise: Vec<f64> = (0..source.len()).map(|_| rng.next_gaussian()).collect();
    let y0 = source
        .iter()
        .zip(&noise)
        .map(|(s, n)| model.a[0][0] * s + model.a[0][1] * n)
        .collect();
    let y1 = source
        .iter()
        .zip(&noise)
        .map(|(s, n)| model.a[1][0] * s + model.a[1][1] * n)
        .collect();
    Ok(([y0, y1], noise))
}

/// Mean squared error between two equal-length signals.
pub fn mse(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            got: b.len(),
        });
    }
    if a.is_empty() {
        return Err(Error::InvalidArgument("signals are empty".into()));
    }
    Ok(a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        / a.len() as f64)
}

/// MSE between `reference` and the least-squares scale alignment of
/// `channel` (the scalar multiple of `channel` closest to `reference`;
/// a zero channel aligns to zero).
pub fn aligned_mse(channel: &[f64], reference: &[f64]) -> Result<f64> {
    if channel.len() != reference.len() {
        return Err(Error::DimensionMismatch {
            expected: reference.len(),
            got: channel.len(),
        });
    }
    let dot_cr: f64 = channel.iter().zip(reference).map(|(c, r)| c * r).sum();
    let dot_cc: f64 = channel.iter().map(|c| c * c).sum();
    let alpha = if dot_cc > 0.0 { dot_cr / dot_cc } else { 0.0 };
    let n = reference.len() as f64;
    Ok(reference
        .iter()
        .zip(channel)
        .map(|(r, c)| {
            let e = alpha * c - r;
            e * e
        })
        .sum::<f64>()
        / n)
}

/// Fitness of a flattened 2x2 unmixing matrix: the smaller aligned MSE of
/// the two output channels of `W * Y` against the source. Scale-invariant
/// in W; non-finite entries score [`WORST_FITNESS`].
pub fn fitness_of_w(w_flat: &[f64], y: &[Vec<f64>; 2], source: &[f64]) -> f64 {
    assert_eq!(w_flat.len(), 4, "unmixing matrix must have 4 entries");
    if w_flat.iter().any(|v| !v.is_finite()) {
        return WORST_FITNESS;
    }
    let mut best = f64::INFINITY;
    for row in 0..2 {
        let channel: Vec<f64> = y[0]
            .iter()
            .zip(&y[1])
            .map(|(a, b)| w_flat[2 * row] * a + w_flat[2 * row + 1] * b)
            .collect();
        let score = aligned_mse(&channel, source).expect("equal lengths");
        if score < best {
            best = score;
        }
    }
    if best.is_finite() {
        best
    } else {
        WORST_FITNESS
    }
}

/// The reconstruction `fitness_of_w` scores: the better output channel of
/// `W * Y`, scale-aligned to the source.
pub fn reconstruct(w_flat: &[f64], y: &[Vec<f64>; 2], source: &[f64]) -> Vec<f64> {
    assert_eq!(w_flat.len(), 4, "unmixing matrix must have 4 entries");
    let mut best: Option<(f64, Vec<f64>)> = None;
    for row in 0..2 {
        let channel: Vec<f64> = y[0]
            .iter()
            .zip(&y[1])
            .map(|(a, b)| w_flat[2 * row] * a + w_flat[2 * row + 1] * b)
            .collect();
        let score = aligned_mse(&channel, source).unwrap_or(f64::INFINITY);
        if best.as_ref().is_none_or(|(s, _)| score < *s) {
            best = Some((score, channel));
        }
    }
    let (_, channel) = best.expect("two channels considered");
    let dot_cr: f64 = channel.iter().zip(source).map(|(c, r)| c * r).sum();
    let dot_cc: f64 = channel.iter().map(|c| c * c).sum();
    let alpha = if dot_cc > 0.0 { dot_cr / dot_cc } else { 0.0 };
    channel.iter().map(|c| alpha * c).collect()
}

/// Run the full pipeline on a pre-built source signal: contaminate, build
/// the 4-dimensional unmixing objective, optimize, and score.
pub fn denoise_signal(
    source: Vec<f64>,
    model: &MixingModel,
    covo: &CovoParams,
    seed: u64,
) -> Result<DenoiseReport> {
    if source.len() < 2 {
        return Err(Error::InvalidArgument(
            "source signal needs at least 2 samples".into(),
        ));
    }
    let mut rng = RngState::new(seed);
    let (y, _noise) = contaminate(&source, model, &mut rng)?;

    let spec = {
        let y = y.clone();
        let source = source.clone();
        ObjectiveSpec::custom(
            "unmix",
            4,
            -UNMIX_BOUND,
            UNMIX_BOUND,
            0.0,
            move |w| fitness_of_w(w, &y, &source),
        )?
    };
    let run = algorithm::run(&spec, covo, seed)?;

    let mse_o_r = fitness_of_w(&run.best_position, &y, &source);
    let mse_o_c = aligned_mse(&y[0], &source)?;
    let best_w = [
        [run.best_position[0], run.best_position[1]],
        [run.best_position[2], run.best_position[3]],
    ];
    Ok(DenoiseReport {
        mse_o_r,
        mse_o_c,
        best_w,
        run,
    })
}

/// Synthesize a source from `ecg`, then run [`denoise_signal`].
pub fn denoise_run(
    ecg: &EcgParams,
    model: &MixingModel,
    covo: &CovoParams,
    seed: u64,
) -> Result<DenoiseReport> {
    let mut rng = RngState::new(seed);
    let source = synth_ecg(ecg, &mut rng)?;
    denoise_signal(source, model, covo, seed)
}
