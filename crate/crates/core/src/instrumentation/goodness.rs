use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The slowly growing `w(n) = (ln n)^exponent`, with `exponent` in `(0, 1/2)`
/// so that `w -> inf` while `w^2 = o(ln n)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WFunction {
    exponent: f64,
}

impl Default for WFunction {
    fn default() -> Self {
        Self { exponent: 1.0 / 3.0 }
    }
}

impl WFunction {
    pub fn new(exponent: f64) -> Result<Self> {
        if exponent > 0.0 && exponent < 0.5 {
            Ok(Self { exponent })
        } else {
            Err(Error::InvalidParams(format!("w exponent {exponent} is outside (0, 1/2)")))
        }
    }

    pub fn exponent(&self) -> f64 {
        self.exponent
    }

    pub fn value(&self, n: f64) -> f64 {
        n.ln().max(0.0).powf(self.exponent)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Goodness {
    Good,
    Intermediate,
    Bad,
}

impl Goodness {
    pub fn is_good(self) -> bool {
        self == Goodness::Good
    }

    pub fn is_bad(self) -> bool {
        self == Goodness::Bad
    }
}

/// `f(m) = max(6m/n, 1/w(n))`.
///
/// Panics if `m == 0`.
pub fn f(m: usize, n: usize, w: WFunction) -> f64 {
    GoodnessRule::new(n, w).f(m)
}

pub fn classify(count: usize, m: usize, n: usize, w: WFunction) -> Goodness {
    GoodnessRule::new(n, w).classify(count, m)
}

/// `f` and the good/intermediate/bad partition for a fixed `n`.
///
/// When the linear branch `6m/n` of `f` is active the thresholds are compared
/// in exact integer arithmetic, so boundary states such as
/// `count * (n + 6m) == m * n` classify correctly.
#[derive(Clone, Copy, Debug)]
pub struct GoodnessRule {
    n: usize,
    w: f64,
    inv_w: f64,
}

impl GoodnessRule {
    pub fn new(n: usize, w: WFunction) -> Self {
        let w = w.value(n as f64);
        Self { n, w, inv_w: 1.0 / w }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn w(&self) -> f64 {
        self.w
    }

    fn linear_branch(&self, m: usize) -> bool {
        6.0 * m as f64 / self.n as f64 >= self.inv_w
    }

    pub fn f(&self, m: usize) -> f64 {
        assert!(m > 0, "f(m) is undefined for m = 0");
        (6.0 * m as f64 / self.n as f64).max(self.inv_w)
    }

    /// Panics unless `count <= m` and `m >= 1`.
    pub fn classify(&self, count: usize, m: usize) -> Goodness {
        assert!(m >= 1 && count <= m, "classify needs 0 <= count <= m, m >= 1 (count {count}, m {m})");
        if count == 0 {
            return Goodness::Bad;
        }
        if self.linear_branch(m) {
            let (c, m, n) = (count as u128, m as u128, self.n as u128);
            if c * (n + 6 * m) >= m * n {
                Goodness::Good
            } else if c * (n + 12 * m) < m * n {
                Goodness::Bad
            } else {
                Goodness::Intermediate
            }
        } else {
            let (c, m) = (count as f64, m as f64);
            if c * (1.0 + self.inv_w) >= m {
                Goodness::Good
            } else if c * (1.0 + 2.0 * self.inv_w) < m {
                Goodness::Bad
            } else {
                Goodness::Intermediate
            }
        }
    }
}
