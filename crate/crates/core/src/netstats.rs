//! Degree-distribution statistics.
//!
//! Out-degree tails are fitted with the discrete power law
//! `P(d) = d^-alpha / zeta(alpha, d_min)` for `d >= d_min`, using the
//! half-shifted closed-form maximum-likelihood estimate and choosing
//! `d_min` by minimum Kolmogorov-Smirnov distance. In-degrees are compared
//! against a geometric law.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::special::hurwitz_zeta;

/// Smallest tail a candidate `d_min` may leave.
pub const MIN_TAIL: usize = 10;

/// Tails smaller than this are reported but flagged.
pub const CONFIDENT_TAIL: usize = 50;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PowerLawFit {
    pub alpha: f64,
    pub alpha_stderr: f64,
    pub d_min: usize,
    pub n_tail: usize,
    pub ks_distance: f64,
}

impl PowerLawFit {
    pub fn is_low_confidence(&self) -> bool {
        self.n_tail < CONFIDENT_TAIL
    }
}

/// Closed-form exponent for the values `>= d_min` of a sorted sample.
fn alpha_mle(tail: &[usize], d_min: usize) -> f64 {
    let shift = d_min as f64 - 0.5;
    let s: f64 = tail.iter().map(|&d| (d as f64 / shift).ln()).sum();
    1.0 + tail.len() as f64 / s
}

/// KS distance between a sorted tail and the fitted discrete law.
fn power_law_ks(tail: &[usize], d_min: usize, alpha: f64) -> f64 {
    let z0 = hurwitz_zeta(alpha, d_min as f64);
    let cdf = |x: usize| 1.0 - hurwitz_zeta(alpha, x as f64 + 1.0) / z0;
    step_ks(tail, cdf)
}

/// Sup distance between the empirical CDF of `sorted` and a model CDF over
/// the integers. Both are step functions, so the sup is attained at an
/// observed value or just before the next one.
fn step_ks(sorted: &[usize], cdf: impl Fn(usize) -> f64) -> f64 {
    let n = sorted.len() as f64;
    let mut worst: f64 = 0.0;
    let mut i = 0;
    while i < sorted.len() {
        let x = sorted[i];
        let mut j = i;
        while j < sorted.len() && sorted[j] == x {
            j += 1;
        }
        let emp = j as f64 / n;
        worst = worst.max((emp - cdf(x)).abs());
        // empirical value still below the jump at x
        if x > 0 {
            worst = worst.max((i as f64 / n - cdf(x - 1)).abs());
        }
        i = j;
    }
    worst.min(1.0)
}

/// Fits a discrete power law to the positive entries of `degrees`.
pub fn fit_power_law(degrees: &[usize]) -> Result<PowerLawFit> {
    let mut values: Vec<usize> = degrees.iter().copied().filter(|&d| d >= 1).collect();
    if values.len() < MIN_TAIL {
        return Err(Error::InsufficientData { needed: MIN_TAIL, got: values.len() });
    }
    values.sort_unstable();
    if values[0] == values[values.len() - 1] {
        return Err(Error::DegenerateSample(format!("every degree equals {}", values[0])));
    }

    // start index of each distinct value leaving a large enough tail
    let mut starts = Vec::new();
    for i in 0..=values.len() - MIN_TAIL {
        if i == 0 || values[i] != values[i - 1] {
            starts.push(i);
        }
    }

    let fits: Vec<PowerLawFit> = starts
        .par_iter()
        .map(|&i| {
            let tail = &values[i..];
            let d_min = values[i];
            let alpha = alpha_mle(tail, d_min);
            PowerLawFit {
                alpha,
                alpha_stderr: (alpha - 1.0) / (tail.len() as f64).sqrt(),
                d_min,
                n_tail: tail.len(),
                ks_distance: power_law_ks(tail, d_min, alpha),
            }
        })
        .collect();

    // first minimum, so ties go to the smallest d_min
    let mut best = fits[0];
    for f in &fits[1..] {
        if f.ks_distance < best.ks_distance {
            best = *f;
        }
    }
    Ok(best)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ExponentialFit {
    pub rate: f64,
    pub mean: f64,
}

/// Maximum-likelihood exponential (geometric) fit: the rate is one over the
/// sample mean.
pub fn fit_exponential(degrees: &[usize]) -> Result<ExponentialFit> {
    if degrees.len() < 2 {
        return Err(Error::InsufficientData { needed: 2, got: degrees.len() });
    }
    let mean = degrees.iter().map(|&d| d as f64).sum::<f64>() / degrees.len() as f64;
    if mean == 0.0 {
        return Err(Error::DegenerateSample("every degree is zero".into()));
    }
    Ok(ExponentialFit { rate: 1.0 / mean, mean })
}

/// KS distance between `values` and the geometric law on `{0, 1, ...}`
/// with the given mean, `P(X <= k) = 1 - (m / (1 + m))^(k + 1)`.
pub fn geometric_ks_distance(values: &[usize], mean: f64) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let mut sorted = values.to_vec();
    sorted.sort_unstable();
    let q = mean / (1.0 + mean);
    step_ks(&sorted, |k| 1.0 - q.powf(k as f64 + 1.0))
}

/// Asymptotic two-sided KS critical value at the 5% level.
pub fn ks_critical_5pct(n: usize) -> f64 {
    1.358 / (n as f64).sqrt()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HistogramRow {
    pub degree: usize,
    pub count: usize,
    /// Fraction of nodes with degree at least `degree`.
    pub ccdf: f64,
}

/// Degree counts in increasing degree order with the complementary CDF.
pub fn degree_histogram(degrees: &[usize]) -> Vec<HistogramRow> {
    let mut sorted = degrees.to_vec();
    sorted.sort_unstable();
    let n = sorted.len() as f64;
    let mut rows = Vec::new();
    let mut i = 0;
    while i < sorted.len() {
        let d = sorted[i];
        let j = i + sorted[i..].partition_point(|&x| x == d);
        rows.push(HistogramRow { degree: d, count: j - i, ccdf: (sorted.len() - i) as f64 / n });
        i = j;
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Inverse-CDF sampler for the discrete power law, using the exact
    /// tail sums. Each draw bisects over `d` on the survival function.
    fn sample_power_law(alpha: f64, d_min: usize, n: usize, seed: u64) -> Vec<usize> {
        let z0 = hurwitz_zeta(alpha, d_min as f64);
        let survival = |d: usize| hurwitz_zeta(alpha, d as f64) / z0;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| {
                let u: f64 = rng.random();
                // largest d with survival(d) >= u
                let (mut lo, mut hi) = (d_min, d_min.max(2));
                while survival(hi) >= u {
                    lo = hi;
                    hi *= 2;
                    if hi > 1 << 40 {
                        return hi;
                    }
                }
                while hi - lo > 1 {
                    let mid = lo + (hi - lo) / 2;
                    if survival(mid) >= u {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                lo
            })
            .collect()
    }

    #[test]
    fn sampler_reproduces_point_masses() {
        let xs = sample_power_law(2.5, 1, 200_000, 5);
        let ones = xs.iter().filter(|&&x| x == 1).count() as f64 / xs.len() as f64;
        let expected = 1.0 / hurwitz_zeta(2.5, 1.0);
        assert!((ones - expected).abs() < 0.005, "{ones} vs {expected}");
    }

    #[test]
    fn recovers_known_exponent() {
        let xs = sample_power_law(2.2, 1, 10_000, 11);
        let fit = fit_power_law(&xs).unwrap();
        assert!((fit.alpha - 2.2).abs() < 0.1, "{fit:?}");
        assert!(fit.ks_distance < 0.05);
        assert!(!fit.is_low_confidence());
    }

    #[test]
    fn recovery_within_three_stderr_on_most_seeds() {
        let hits = (0..40)
            .filter(|&seed| {
                let fit = fit_power_law(&sample_power_law(2.0, 1, 2000, 100 + seed as u64)).unwrap();
                (fit.alpha - 2.0).abs() <= 3.0 * fit.alpha_stderr
            })
            .count();
        assert!(hits >= 38, "{hits}/40");
    }

    #[test]
    fn degenerate_and_small_samples() {
        assert!(matches!(fit_power_law(&[3; 50]), Err(Error::DegenerateSample(_))));
        assert!(matches!(fit_power_law(&[0, 0, 1, 2, 3]), Err(Error::InsufficientData { needed: 10, got: 3 })));
    }

    #[test]
    fn small_tail_cutoffs_are_not_considered() {
        let mut xs = vec![1usize; 20];
        xs.push(100);
        let fit = fit_power_law(&xs).unwrap();
        // the only cutoff leaving ten values is d_min = 1
        let feasible: Vec<usize> =
            [1usize, 100].into_iter().filter(|&d| xs.iter().filter(|&&x| x >= d).count() >= MIN_TAIL).collect();
        assert_eq!(feasible, [1]);
        assert_eq!(fit.d_min, 1);
        assert_eq!(fit.n_tail, 21);
    }

    #[test]
    fn exhaustive_cutoff_scan_agrees() {
        let xs = sample_power_law(2.4, 3, 400, 8);
        let fit = fit_power_law(&xs).unwrap();
        let mut best = (f64::INFINITY, 0);
        let max = *xs.iter().max().unwrap();
        for d in 1..=max {
            let mut tail: Vec<usize> = xs.iter().copied().filter(|&x| x >= d).collect();
            if tail.len() < MIN_TAIL || !tail.contains(&d) {
                continue;
            }
            tail.sort_unstable();
            let a = alpha_mle(&tail, d);
            let ks = power_law_ks(&tail, d, a);
            if ks < best.0 {
                best = (ks, d);
            }
        }
        assert_eq!(fit.d_min, best.1);
        assert_eq!(fit.ks_distance, best.0);
    }

    #[test]
    fn exponent_is_scale_covariant() {
        // alpha depends on the tail only through d / (d_min - 1/2)
        let tail = [4usize, 5, 6, 9, 12, 20, 31, 40, 77, 90];
        let c = 7.0;
        let scaled_sum: f64 = tail.iter().map(|&d| (c * d as f64 / (c * 3.5)).ln()).sum();
        let scaled = 1.0 + tail.len() as f64 / scaled_sum;
        assert!((alpha_mle(&tail, 4) - scaled).abs() < 1e-12);
    }

    #[test]
    fn stderr_shrinks_with_tail_size() {
        let xs = sample_power_law(2.2, 1, 16_000, 21);
        let errs: Vec<f64> = [1000, 4000, 16_000]
            .iter()
            .map(|&n| fit_power_law(&xs[..n]).unwrap())
            .map(|f| f.alpha_stderr * (f.n_tail as f64).sqrt() / (f.alpha - 1.0))
            .collect();
        for e in &errs {
            assert!((e - 1.0).abs() < 1e-12);
        }
        let fits: Vec<_> = [1000, 16_000].iter().map(|&n| fit_power_law(&xs[..n]).unwrap()).collect();
        assert!(fits[1].alpha_stderr < fits[0].alpha_stderr);
    }

    #[test]
    fn exponential_fit() {
        let f = fit_exponential(&[2, 6, 4, 4]).unwrap();
        assert_eq!(f.mean, 4.0);
        assert_eq!(f.rate, 0.25);
        assert!(fit_exponential(&[0, 0, 0]).is_err());
        assert!(fit_exponential(&[7]).is_err());

        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let geo = rand_distr::Geometric::new(0.25).unwrap();
        let xs: Vec<usize> = (0..10_000).map(|_| rng.sample(geo) as usize).collect();
        let f = fit_exponential(&xs).unwrap();
        assert!((f.mean - 3.0).abs() < 0.1, "{f:?}");
        let ks = geometric_ks_distance(&xs, f.mean);
        assert!(ks < ks_critical_5pct(xs.len()), "{ks}");
    }

    #[test]
    fn geometric_ks_detects_other_shapes() {
        let xs: Vec<usize> = (0..5000).map(|i| 3 + i % 2).collect();
        let ks = geometric_ks_distance(&xs, 3.5);
        assert!(ks > 10.0 * ks_critical_5pct(xs.len()));
    }

    #[test]
    fn histogram_rows() {
        let rows = degree_histogram(&[1, 2, 1]);
        assert_eq!(
            rows,
            vec![
                HistogramRow { degree: 1, count: 2, ccdf: 1.0 },
                HistogramRow { degree: 2, count: 1, ccdf: 1.0 / 3.0 },
            ]
        );
        assert!(degree_histogram(&[]).is_empty());
    }
}
