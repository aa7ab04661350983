//! Exhaustive check of the drift inequalities behind the factor-2 bias of
//! `B` and `R*` in not-good states.

use serde::{Deserialize, Serialize};

use crate::instrumentation::{tau_success_count, GoodnessRule, WFunction};
use crate::process::Color;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BiasViolation {
    pub color: Color,
    pub n: usize,
    pub m: usize,
    pub count: usize,
}

/// `2n (M - B) >= M^2 + 4MB + B^2`.
pub fn blue_bias_holds(n: usize, m: usize, b: usize) -> bool {
    let (n, m, b) = (n as u128, m as u128, b as u128);
    2 * n * (m - b) >= m * m + 4 * m * b + b * b
}

/// `(M - R)(2n - R) >= 2R(R - 1)`.
pub fn red_bias_holds(n: usize, m: usize, r: usize) -> bool {
    let (n, m, r) = (n as u128, m as u128, r as u128);
    (m - r) * (2 * n - r) >= 2 * r * r.saturating_sub(1)
}

/// Every `(n, M, count)` with `n <= n_max`, `floor((ln n)^2) <= M <= n`,
/// the color not good, that violates its inequality.
pub fn bias_inequality_scan(n_max: usize, w: WFunction) -> Vec<BiasViolation> {
    let mut out = Vec::new();
    for n in 1..=n_max {
        let rule = GoodnessRule::new(n, w);
        for m in tau_success_count(n).max(1)..=n {
            for c in 0..=m {
                if rule.classify(c, m).is_good() {
                    continue;
                }
                if !blue_bias_holds(n, m, c) {
                    out.push(BiasViolation { color: Color::Blue, n, m, count: c });
                }
                if !red_bias_holds(n, m, c) {
                    out.push(BiasViolation { color: Color::Red, n, m, count: c });
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scan_to_64_is_clean() {
        assert!(bias_inequality_scan(64, WFunction::default()).is_empty());
    }

    #[test]
    fn holds_below_the_scanned_range_too() {
        let w = WFunction::default();
        for n in 1..=128 {
            let rule = GoodnessRule::new(n, w);
            for m in 1..=n {
                for c in (0..=m).filter(|&c| !rule.classify(c, m).is_good()) {
                    assert!(blue_bias_holds(n, m, c), "blue n={n} m={m} c={c}");
                    assert!(red_bias_holds(n, m, c), "red n={n} m={m} c={c}");
                }
            }
        }
    }

    #[test]
    fn good_states_can_violate() {
        // B = M: the left side vanishes
        assert!(!blue_bias_holds(10, 5, 5));
    }

    #[test]
    fn sparse_blue_case_bounds() {
        // M >= 7B: LHS >= 12/7 M^2 and RHS <= 78/49 M^2
        for n in [50usize, 200, 1000] {
            for m in 1..=n {
                for b in 0..=m / 7 {
                    let lhs = 2.0 * n as f64 * (m - b) as f64;
                    let rhs = (m * m + 4 * m * b + b * b) as f64;
                    let m2 = (m * m) as f64;
                    assert!(lhs >= 12.0 / 7.0 * m2 - 1e-9);
                    assert!(rhs <= 78.0 / 49.0 * m2 + 1e-9);
                }
            }
        }
    }
}
