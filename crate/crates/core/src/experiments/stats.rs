use serde::{Deserialize, Serialize};

/// Mean and standard error of a sample, accumulated in a fixed order so the
/// result does not depend on how trials were scheduled.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Moments {
    count: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    /// NaN when empty.
    pub fn mean(&self) -> f64 {
        if self.count == 0 {
            f64::NAN
        } else {
            self.mean
        }
    }

    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            self.m2 / (self.count - 1) as f64
        }
    }

    pub fn stderr(&self) -> f64 {
        if self.count == 0 {
            f64::NAN
        } else {
            (self.variance() / self.count as f64).sqrt()
        }
    }

    pub fn estimate(&self) -> Estimate {
        Estimate { mean: self.mean(), stderr: self.stderr(), count: self.count }
    }
}

impl FromIterator<f64> for Moments {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut m = Moments::default();
        for x in iter {
            m.push(x);
        }
        m
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
    pub count: u64,
}

impl Estimate {
    pub fn scaled(&self, by: f64) -> Estimate {
        Estimate { mean: self.mean * by, stderr: self.stderr * by, count: self.count }
    }

    /// Symmetric interval of `z` standard errors.
    pub fn interval(&self, z: f64) -> (f64, f64) {
        (self.mean - z * self.stderr, self.mean + z * self.stderr)
    }

    /// Whether `value` lies within `z` standard errors.
    pub fn agrees_with(&self, value: f64, z: f64) -> bool {
        (self.mean - value).abs() <= z * self.stderr
    }
}

/// z statistic for the difference of two independent estimates.
pub fn two_sample_z(a: &Estimate, b: &Estimate) -> f64 {
    let se = (a.stderr * a.stderr + b.stderr * b.stderr).sqrt();
    if se == 0.0 {
        if a.mean == b.mean {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        (a.mean - b.mean) / se
    }
}

/// `2 n ln n`, the leading-order extinction time.
pub fn leading_order(n: usize) -> f64 {
    2.0 * n as f64 * (n as f64).ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moments_match_two_pass() {
        let xs = [3.0, 7.0, 7.0, 19.0, 24.0];
        let m: Moments = xs.iter().copied().collect();
        let mean = xs.iter().sum::<f64>() / 5.0;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / 4.0;
        assert!((m.mean() - mean).abs() < 1e-12);
        assert!((m.variance() - var).abs() < 1e-12);
        assert!((m.stderr() - (var / 5.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn empty_and_single() {
        assert!(Moments::default().mean().is_nan());
        let one: Moments = [4.0].into_iter().collect();
        assert_eq!(one.stderr(), 0.0);
    }

    #[test]
    fn z_of_identical_estimates() {
        let e = Estimate { mean: 1.0, stderr: 0.0, count: 3 };
        assert_eq!(two_sample_z(&e, &e), 0.0);
        let f = Estimate { mean: 2.0, stderr: 0.5, count: 3 };
        assert!((two_sample_z(&f, &e) - 2.0).abs() < 1e-12);
    }
}
