//! Alternating Bernoulli trials and the stationary-red bounds on `K_{n,n}`.
//!
//! A blue walker on `K_{n,n}` alternates sides, so with reds fixed its
//! hitting time is the number of trials until the first success when odd
//! trials succeed with `p1` and even ones with `p2`. That count `N` has the
//! law of `2X - Y` with `X ~ Geometric(s)`, `s = p1 + p2 - p1 p2`, and
//! `Y ~ Bernoulli(p1 / s)` independent.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlternatingTrialSpec {
    pub p1: f64,
    pub p2: f64,
}

impl AlternatingTrialSpec {
    pub fn new(p1: f64, p2: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p1) || !(0.0..=1.0).contains(&p2) {
            return Err(Error::InvalidParams(format!("p1 = {p1}, p2 = {p2} must lie in [0, 1]")));
        }
        let spec = Self { p1, p2 };
        if spec.s() <= 0.0 {
            return Err(Error::DegenerateTrials { p1, p2 });
        }
        Ok(spec)
    }

    /// Probability that one odd/even pair of trials contains a success.
    pub fn s(&self) -> f64 {
        self.p1 + self.p2 - self.p1 * self.p2
    }

    /// Parameter of `Y`.
    pub fn y_param(&self) -> f64 {
        self.p1 / self.s()
    }

    /// `P(N = k)` for `k = 1..=cap`, by following the survival probability
    /// through the trials one at a time.
    pub fn trials_pmf(&self, cap: usize) -> Vec<f64> {
        let mut survive = 1.0;
        (1..=cap)
            .map(|k| {
                let succ = if k % 2 == 1 { self.p1 } else { self.p2 };
                let mass = survive * succ;
                survive *= 1.0 - succ;
                mass
            })
            .collect()
    }

    /// `P(2X - Y = k)` for `k = 1..=cap`, convolving the two laws.
    pub fn two_x_minus_y_pmf(&self, cap: usize) -> Vec<f64> {
        let s = self.s();
        let y = self.y_param();
        let mut pmf = vec![0.0; cap];
        let mut geo = s;
        for x in 1.. {
            let two_x = 2 * x;
            if two_x - 1 > cap {
                break;
            }
            // Y = 1 lands on 2x - 1, Y = 0 on 2x
            pmf[two_x - 2] += geo * y;
            if two_x <= cap {
                pmf[two_x - 1] += geo * (1.0 - y);
            }
            geo *= 1.0 - s;
        }
        pmf
    }

    /// `E[2X - Y] = (2 - p1) / s`.
    pub fn mean(&self) -> f64 {
        (2.0 - self.p1) / self.s()
    }
}

/// Largest pointwise difference between the two pmfs on `1..=cap`.
pub fn alternating_identity_check(spec: &AlternatingTrialSpec, cap: usize) -> f64 {
    spec.trials_pmf(cap)
        .iter()
        .zip(spec.two_x_minus_y_pmf(cap))
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
}

/// Bounds on the expected total stationary-red extinction time on `K_{n,n}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KnnBounds {
    pub n: usize,
    /// `sum_{m=1}^{n} (2n/m - 1) = 2n H_n - n`: every term at `p2 = 0`.
    pub lower: f64,
    /// Terms with `m < n / ln n` inflated by `1 + 1/ln n`, the rest by 4/3.
    pub upper: f64,
}

impl KnnBounds {
    pub fn ratio_lower(&self) -> f64 {
        self.lower / (2.0 * self.n as f64 * (self.n as f64).ln())
    }

    pub fn ratio_upper(&self) -> f64 {
        self.upper / (2.0 * self.n as f64 * (self.n as f64).ln())
    }
}

/// Per-term upper bound on the expected steps with `m` reds left.
///
/// With `sigma = p1 + p2 = m / n` and `p1 p2 <= sigma^2 / 4`, the mean
/// `(2 - p1) / s` is at most `(2 / sigma) / (1 - sigma / 4)`; for
/// `sigma < 1 / ln n` that factor is below `1 + 1/ln n`, and never above 4/3.
pub fn knn_term_upper(n: usize, m: usize) -> f64 {
    let ln_n = (n as f64).ln();
    let base = 2.0 * n as f64 / m as f64;
    if (m as f64) < n as f64 / ln_n {
        base * (1.0 + 1.0 / ln_n)
    } else {
        base * 4.0 / 3.0
    }
}

pub fn knn_term_lower(n: usize, m: usize) -> f64 {
    2.0 * n as f64 / m as f64 - 1.0
}

/// Panics if `n < 3`.
pub fn knn_stationary_bounds(n: usize) -> KnnBounds {
    assert!(n >= 3, "the regime split needs ln n > 1");
    let lower = (1..=n).map(|m| knn_term_lower(n, m)).sum();
    let upper = (1..=n).map(|m| knn_term_upper(n, m)).sum();
    KnnBounds { n, lower, upper }
}

pub fn harmonic(n: usize) -> f64 {
    (1..=n).rev().map(|k| 1.0 / k as f64).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_example() {
        let spec = AlternatingTrialSpec::new(0.3, 0.2).unwrap();
        assert!(alternating_identity_check(&spec, 50) <= 1e-12);
    }

    #[test]
    fn p2_zero_mean() {
        for (m, n) in [(1usize, 10usize), (3, 10), (7, 100)] {
            let p1 = m as f64 / n as f64;
            let spec = AlternatingTrialSpec::new(p1, 0.0).unwrap();
            let direct: f64 = spec.trials_pmf(20_000).iter().enumerate().map(|(i, w)| (i + 1) as f64 * w).sum();
            let expect = 2.0 * n as f64 / m as f64 - 1.0;
            assert!((direct - expect).abs() < 1e-9, "{direct} vs {expect}");
            assert!((spec.mean() - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn equal_probabilities_mean_by_series() {
        for sp in [0.05, 0.2, 0.5, 0.9] {
            let spec = AlternatingTrialSpec::new(sp, sp).unwrap();
            let series: f64 = spec
                .two_x_minus_y_pmf(4000)
                .iter()
                .enumerate()
                .map(|(i, w)| (i + 1) as f64 * w)
                .sum();
            assert!((series - spec.mean()).abs() < 1e-12, "{sp}: {series} vs {}", spec.mean());
        }
    }

    #[test]
    fn degenerate_rejected() {
        assert!(matches!(AlternatingTrialSpec::new(0.0, 0.0), Err(Error::DegenerateTrials { .. })));
        assert!(AlternatingTrialSpec::new(1.2, 0.0).is_err());
    }

    #[test]
    fn lower_bound_closed_form() {
        for n in [3usize, 10, 1000, 1 << 14] {
            let b = knn_stationary_bounds(n);
            let closed = 2.0 * n as f64 * harmonic(n) - n as f64;
            assert!((b.lower - closed).abs() < 1e-9 * closed);
        }
    }

    #[test]
    fn terms_bracket_every_split() {
        for n in [3usize, 16, 200, 5000] {
            for m in 1..=n {
                let sigma = m as f64 / n as f64;
                for i in 0..=20 {
                    let p1 = sigma * i as f64 / 20.0;
                    let p2 = (sigma - p1).max(0.0);
                    if p1 > 1.0 || p2 > 1.0 {
                        continue;
                    }
                    let mean = AlternatingTrialSpec::new(p1, p2).unwrap().mean();
                    assert!(mean >= knn_term_lower(n, m) - 1e-9, "n={n} m={m} p1={p1}");
                    assert!(mean <= knn_term_upper(n, m) + 1e-9, "n={n} m={m} p1={p1}");
                }
            }
        }
    }

    #[test]
    fn gap_is_order_n_log_log_n() {
        let scaled: Vec<f64> = (10..=16)
            .map(|e| {
                let n = 1usize << e;
                let b = knn_stationary_bounds(n);
                (b.upper - b.lower) / (n as f64 * (n as f64).ln().ln())
            })
            .collect();
        for s in &scaled {
            assert!(*s > 0.0 && *s < 4.0, "{scaled:?}");
        }
    }
}
