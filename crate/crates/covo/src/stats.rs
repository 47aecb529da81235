//! Descriptive statistics and hypothesis tests over per-seed run outcomes:
//! the five-number summary, the Wilcoxon signed-rank test (exact by
//! enumeration for small samples), the tie-corrected Friedman test, and
//! Welch's t-test.
//!
//! Test statistics, ranking, and the exact enumeration are implemented
//! here; only the continuous reference distributions (normal, chi-squared,
//! Student's t) come from `statrs`.

use std::fmt;

use statrs::distribution::{ChiSquared, ContinuousCDF, Normal, StudentsT};

use crate::error::{Error, Result};

/// Sample size up to which the Wilcoxon p-value is computed by exact
/// enumeration of all sign assignments.
pub const WILCOXON_EXACT_MAX_N: usize = 12;

/// Labelled set of per-run outcomes. Non-empty, all finite.
#[derive(Clone, Debug)]
pub struct SampleSet {
    label: String,
    values: Vec<f64>,
}

impl SampleSet {
    pub fn new(label: impl Into<String>, values: Vec<f64>) -> Result<Self> {
        let label = label.into();
        if values.is_empty() {
            return Err(Error::InvalidArgument(format!(
                "sample set {label:?} is empty"
            )));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "sample set {label:?} contains non-finite value {v}"
            )));
        }
        Ok(Self { label, values })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Five-number summary under minimization: best is the minimum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Descriptive {
    pub best: f64,
    pub median: f64,
    pub worst: f64,
    pub mean: f64,
    /// Sample standard deviation (n-1 denominator); 0 for a single value.
    pub std: f64,
}

/// Which hypothesis test produced a report.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TestKind {
    Friedman,
    Wilcoxon,
    TTest,
}

impl fmt::Display for TestKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TestKind::Friedman => "friedman",
            TestKind::Wilcoxon => "wilcoxon",
            TestKind::TTest => "t_test",
        })
    }
}

/// Outcome of one hypothesis test.
#[derive(Clone, Debug)]
pub struct TestReport {
    pub test: TestKind,
    pub statistic: f64,
    /// Two-sided p-value in [0, 1].
    pub p_value: f64,
    /// Relevant sizes: `[pairs, nonzero-diffs]` for Wilcoxon,
    /// `[blocks, treatments]` for Friedman, `[n_a, n_b]` for the t-test.
    pub n: Vec<usize>,
}

/// Five-number summary of a sample set.
pub fn describe(samples: &SampleSet) -> Descriptive {
    let mut sorted = samples.values().to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    let median = if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
    };
    let mean = sorted.iter().sum::<f64>() / n as f64;
    let std = if n < 2 {
        0.0
    } else {
        (sorted.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64).sqrt()
    };
    Descriptive {
        best: sorted[0],
        median,
        worst: sorted[n - 1],
        mean,
        std,
    }
}

/// Midranks of `values` (average rank across ties), 1-based.
fn midranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        // Positions i..=j share the average of ranks i+1..=j+1.
        let avg = (i + j + 2) as f64 / 2.0;
        for &idx in &order[i..=j] {
            ranks[idx] = avg;
        }
        i = j + 1;
    }
    ranks
}

/// Paired two-sided Wilcoxon signed-rank test. Zero differences are
/// dropped; tied magnitudes receive midranks. The statistic is
/// `min(W+, W-)`. Exact enumeration for up to [`WILCOXON_EXACT_MAX_N`]
/// nonzero differences, normal approximation with continuity correction
/// beyond that. All differences zero reports statistic 0 with p = 1.
pub fn wilcoxon_signed_rank(a: &SampleSet, b: &SampleSet) -> Result<TestReport> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            got: b.len(),
        });
    }
    let diffs: Vec<f64> = a
        .values()
        .iter()
        .zip(b.values())
        .map(|(x, y)| x - y)
        .filter(|d| *d != 0.0)
        .collect();
    let n = diffs.len();
    if n == 0 {
        return Ok(TestReport {
            test: TestKind::Wilcoxon,
            statistic: 0.0,
            p_value: 1.0,
            n: vec![a.len(), 0],
        });
    }

    let magnitudes: Vec<f64> = diffs.iter().map(|d| d.abs()).collect();
    let ranks = midranks(&magnitudes);
    let w_plus: f64 = diffs
        .iter()
        .zip(&ranks)
        .filter(|(d, _)| **d > 0.0)
        .map(|(_, r)| *r)
        .sum();
    let total: f64 = ranks.iter().sum();
    let w_minus = total - w_plus;
    let statistic = w_plus.min(w_minus);

    let p_value = if n <= WILCOXON_EXACT_MAX_N {
        // Enumerate all 2^n sign assignments of the rank multiset. The
        // subset-sum distribution is symmetric around total/2, so twice the
        // lower tail at min(W+, W-) is the two-sided p.
        let mut at_or_below = 0u64;
        let assignments = 1u64 << n;
        for mask in 0..assignments {
            let mut w = 0.0;
            for (bit, r) in ranks.iter().enumerate() {
                if mask >> bit & 1 == 1 {
                    w += r;
                }
            }
            if w <= statistic + 1e-12 {
                at_or_below += 1;
            }
        }
        (2.0 * at_or_below as f64 / assignments as f64).min(1.0)
    } else {
        let mean = total / 2.0;
        let var: f64 = ranks.iter().map(|r| r * r).sum::<f64>() / 4.0;
        if var == 0.0 {
            1.0
        } else {
            let z = (statistic - mean + 0.5) / var.sqrt();
            let normal = Normal::new(0.0, 1.0).expect("unit normal");
            (2.0 * normal.cdf(z)).clamp(0.0, 1.0)
        }
    };

    Ok(TestReport {
        test: TestKind::Wilcoxon,
        statistic,
        p_value,
        n: vec![a.len(), n],
    })
}

/// Tie-corrected Friedman test over an `n blocks x k treatments` matrix.
/// Within-block midranks; the chi-squared statistic carries k-1 degrees of
/// freedom. A matrix whose every block is fully tied reports statistic 0
/// with p = 1.
pub fn friedman(matrix: &[Vec<f64>]) -> Result<TestReport> {
    let n = matrix.len();
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "friedman needs at least 2 blocks, got {n}"
        )));
    }
    let k = matrix[0].len();
    if k < 2 {
        return Err(Error::InvalidArgument(format!(
            "friedman needs at least 2 treatments, got {k}"
        )));
    }
    for (i, row) in matrix.iter().enumerate() {
        if row.len() != k {
            return Err(Error::InvalidArgument(format!(
                "ragged matrix: block {i} has {} treatments, expected {k}",
                row.len()
            )));
        }
        if let Some(v) = row.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "block {i} contains non-finite value {v}"
            )));
        }
    }

    let mut rank_sums = vec![0.0; k];
    let mut tie_term = 0.0;
    for row in matrix {
        let ranks = midranks(row);
        for (j, r) in ranks.iter().enumerate() {
            rank_sums[j] += r;
        }
        // Sum of t^3 - t over tie groups in this block.
        let mut sorted = row.clone();
        sorted.sort_by(f64::total_cmp);
        let mut i = 0;
        while i < sorted.len() {
            let mut j = i;
            while j + 1 < sorted.len() && sorted[j + 1] == sorted[i] {
                j += 1;
            }
            let t = (j - i + 1) as f64;
            tie_term += t * t * t - t;
            i = j + 1;
        }
    }

    let nf = n as f64;
    let kf = k as f64;
    let correction = 1.0 - tie_term / (kf * (kf * kf - 1.0) * nf);
    let (statistic, p_value) = if correction <= 0.0 {
        // Every block fully tied: no signal by construction.
        (0.0, 1.0)
    } else {
        let ssq: f64 = rank_sums.iter().map(|r| r * r).sum();
        let raw = (12.0 / (kf * nf * (kf + 1.0)) * ssq - 3.0 * nf * (kf + 1.0)) / correction;
        let statistic = raw.max(0.0); // guard the fully-tied rounding residue
        let chi2 = ChiSquared::new(kf - 1.0).expect("k >= 2");
        (statistic, (1.0 - chi2.cdf(statistic)).clamp(0.0, 1.0))
    };

    Ok(TestReport {
        test: TestKind::Friedman,
        statistic,
        p_value,
        n: vec![n, k],
    })
}

/// Welch's two-sample t-test (two-sided). Both sides degenerate with equal
/// means reports t = 0, p = 1; degenerate with distinct means reports an
/// infinite statistic with p = 0.
pub fn t_test(a: &SampleSet, b: &SampleSet) -> Result<TestReport> {
    if a.len() < 2 || b.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "t-test needs at least 2 values per side, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let var = |v: &[f64], m: f64| {
        v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (v.len() - 1) as f64
    };
    let (ma, mb) = (mean(a.values()), mean(b.values()));
    let (va, vb) = (var(a.values(), ma), var(b.values(), mb));
    let se2 = va / na + vb / nb;

    let (statistic, p_value) = if se2 == 0.0 {
        if ma == mb {
            (0.0, 1.0)
        } else {
            (f64::INFINITY.copysign(ma - mb), 0.0)
        }
    } else {
        let t = (ma - mb) / se2.sqrt();
        let df = se2 * se2
            / ((va / na) * (va / na) / (na - 1.0) + (vb / nb) * (vb / nb) / (nb - 1.0));
        let dist = StudentsT::new(0.0, 1.0, df)
            .map_err(|e| Error::InvalidArgument(format!("degenerate t distribution: {e}")))?;
        (t, (2.0 * (1.0 - dist.cdf(t.abs()))).clamp(0.0, 1.0))
    };

    Ok(TestReport {
        test: TestKind::TTest,
        statistic,
        p_value,
        n: vec![a.len(), b.len()],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn set(label: &str, v: &[f64]) -> SampleSet {
        SampleSet::new(label, v.to_vec()).unwrap()
    }

    #[test]
    fn describe_examples() {
        let d = describe(&set("x", &[3.0, 1.0, 2.0]));
        assert_eq!(d.best, 1.0);
        assert_eq!(d.median, 2.0);
        assert_eq!(d.worst, 3.0);
        assert_eq!(d.mean, 2.0);
        assert_abs_diff_eq!(d.std, 1.0, epsilon = 1e-15);

        let c = describe(&set("c", &[4.5, 4.5, 4.5]));
        assert_eq!((c.best, c.median, c.worst, c.mean, c.std), (4.5, 4.5, 4.5, 4.5, 0.0));

        let s = describe(&set("s", &[7.25]));
        assert_eq!((s.best, s.median, s.worst, s.mean, s.std), (7.25, 7.25, 7.25, 7.25, 0.0));

        let even = describe(&set("e", &[1.0, 2.0, 3.0, 4.0]));
        assert_eq!(even.median, 2.5);

        assert!(SampleSet::new("bad", vec![]).is_err());
        assert!(SampleSet::new("bad", vec![f64::NAN]).is_err());
        assert!(d.best <= d.median && d.median <= d.worst);
    }

    #[test]
    fn wilcoxon_all_shifted_pairs() {
        // All differences -1: W = 0 and the exact two-sided p over the 32
        // sign assignments is 2/32.
        let a = set("a", &[1.0, 2.0, 3.0, 4.0, 5.0]);
        let b = set("b", &[2.0, 3.0, 4.0, 5.0, 6.0]);
        let r = wilcoxon_signed_rank(&a, &b).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert_abs_diff_eq!(r.p_value, 0.0625, epsilon = 1e-15);

        let swapped = wilcoxon_signed_rank(&b, &a).unwrap();
        assert_abs_diff_eq!(swapped.p_value, r.p_value, epsilon = 1e-15);
    }

    #[test]
    fn wilcoxon_identical_sets() {
        let a = set("a", &[0.5, 1.5, 2.5, 3.5]);
        let r = wilcoxon_signed_rank(&a, &a).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert_eq!(r.p_value, 1.0);
        assert_eq!(r.n, vec![4, 0]);
    }

    #[test]
    fn wilcoxon_rejects_length_mismatch() {
        let a = set("a", &[1.0, 2.0]);
        let b = set("b", &[1.0, 2.0, 3.0]);
        assert!(wilcoxon_signed_rank(&a, &b).is_err());
    }

    #[test]
    fn wilcoxon_approximate_path_is_sane() {
        // 30 pairs, consistent shift: p must be small and in [0, 1].
        let a: Vec<f64> = (0..30).map(|i| i as f64).collect();
        let b: Vec<f64> = (0..30).map(|i| i as f64 + 0.5 + (i % 3) as f64).collect();
        let r = wilcoxon_signed_rank(&set("a", &a), &set("b", &b)).unwrap();
        assert!(r.p_value > 0.0 && r.p_value < 0.001, "p = {}", r.p_value);
    }

    #[test]
    fn friedman_constant_matrix() {
        let m = vec![vec![5.0, 5.0, 5.0], vec![6.0, 6.0, 6.0], vec![7.0, 7.0, 7.0]];
        let r = friedman(&m).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert_eq!(r.p_value, 1.0);
    }

    // Frozen by hand-ranking: one treatment always best, one always worst,
    // over three blocks. Rank sums (3, 6, 9) give chi² = 6 and the
    // chi-squared upper tail with 2 degrees of freedom is e^{-3}.
    #[test]
    fn friedman_hand_ranked_case() {
        let m = vec![
            vec![1.0, 2.0, 3.0],
            vec![1.5, 2.5, 3.5],
            vec![0.0, 5.0, 9.0],
        ];
        let r = friedman(&m).unwrap();
        assert_abs_diff_eq!(r.statistic, 6.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r.p_value, 0.049787068367863944, epsilon = 1e-12);
    }

    #[test]
    fn friedman_is_invariant_under_column_permutation_and_monotone_maps() {
        let m = vec![
            vec![0.1, 0.9, 0.4],
            vec![0.2, 0.8, 0.3],
            vec![0.3, 0.7, 0.5],
            vec![0.4, 0.6, 0.2],
        ];
        let base = friedman(&m).unwrap();

        let permuted: Vec<Vec<f64>> =
            m.iter().map(|r| vec![r[2], r[0], r[1]]).collect();
        let p = friedman(&permuted).unwrap();
        assert_abs_diff_eq!(p.statistic, base.statistic, epsilon = 1e-12);

        // Strictly monotone per-block transform leaves ranks unchanged.
        let mapped: Vec<Vec<f64>> = m
            .iter()
            .map(|r| r.iter().map(|v| v.exp() * 3.0 + 1.0).collect())
            .collect();
        let t = friedman(&mapped).unwrap();
        assert_abs_diff_eq!(t.statistic, base.statistic, epsilon = 1e-12);
    }

    #[test]
    fn friedman_rejects_bad_matrices() {
        assert!(friedman(&[vec![1.0, 2.0]]).is_err());
        assert!(friedman(&[vec![1.0, 2.0], vec![1.0]]).is_err());
        assert!(friedman(&[vec![1.0], vec![2.0]]).is_err());
    }

    #[test]
    fn t_test_examples() {
        let a = set("a", &[1.0, 2.0, 3.0, 4.0]);
        let same = t_test(&a, &a).unwrap();
        assert_eq!(same.statistic, 0.0);
        assert_eq!(same.p_value, 1.0);

        let zeros = set("z", &[0.0, 0.0, 0.0, 0.0]);
        let ones = set("o", &[1.0, 1.0, 1.0, 1.0 + 1e-9]);
        let r = t_test(&zeros, &ones).unwrap();
        assert!(r.statistic.abs() > 10.0);
        assert!(r.p_value < 0.01);

        let back = t_test(&ones, &zeros).unwrap();
        assert_abs_diff_eq!(back.statistic, -r.statistic, epsilon = 1e-12);

        // Degenerate variances, distinct means.
        let flat_a = set("fa", &[2.0, 2.0]);
        let flat_b = set("fb", &[3.0, 3.0]);
        let deg = t_test(&flat_a, &flat_b).unwrap();
        assert!(deg.statistic.is_infinite());
        assert_eq!(deg.p_value, 0.0);

        assert!(t_test(&set("one", &[1.0]), &a).is_err());
    }

    #[test]
    fn all_tests_report_probabilities() {
        let a = set("a", &[0.3, 0.1, 0.9, 0.5]);
        let b = set("b", &[0.2, 0.4, 0.8, 0.6]);
        for p in [
            wilcoxon_signed_rank(&a, &b).unwrap().p_value,
            t_test(&a, &b).unwrap().p_value,
            friedman(&[vec![1.0, 2.0], vec![2.0, 1.0], vec![1.5, 1.6]])
                .unwrap()
                .p_value,
        ] {
            assert!((0.0..=1.0).contains(&p));
        }
    }
}
