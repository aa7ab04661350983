//! Exact hitting quantities for nearest-neighbour walks with an upward bias:
//! `up(x) >= alpha` and `down(x) <= up(x) / 2` at every state.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Reflecting floor for the expected-time system. The walk in question lives
/// on all of Z; placing the floor this far down changes the answer by less
/// than `2^-60`.
pub const DEFAULT_FLOOR: i64 = -64;

const PROB_TOL: f64 = 1e-12;

/// Transition probabilities on states `0..k`. Below 0 the walk keeps the
/// probabilities of state 0; state `k` is the target.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BiasedWalkSpec {
    k: usize,
    alpha: f64,
    up: Vec<f64>,
    down: Vec<f64>,
}

impl BiasedWalkSpec {
    pub fn new(k: usize, alpha: f64, up: Vec<f64>, down: Vec<f64>) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidWalk("k must be at least 1".into()));
        }
        if !(alpha > 0.0 && alpha <= 2.0 / 3.0 + PROB_TOL) {
            return Err(Error::InvalidWalk(format!("alpha = {alpha} is outside (0, 2/3]")));
        }
        if up.len() != k || down.len() != k {
            return Err(Error::InvalidWalk(format!(
                "need probabilities for states 0..{k}, got {} up and {} down",
                up.len(),
                down.len()
            )));
        }
        for (x, (&u, &d)) in up.iter().zip(&down).enumerate() {
            if !(0.0..=1.0).contains(&u) || !(0.0..=1.0).contains(&d) || u + d > 1.0 + PROB_TOL {
                return Err(Error::InvalidWalk(format!("state {x}: up {u} and down {d} are not probabilities")));
            }
            if u < alpha - PROB_TOL {
                return Err(Error::InvalidWalk(format!("state {x}: up {u} < alpha {alpha}")));
            }
            if d > u / 2.0 + PROB_TOL {
                return Err(Error::InvalidWalk(format!("state {x}: down {d} > up/2 = {}", u / 2.0)));
            }
        }
        Ok(Self { k, alpha, up, down })
    }

    /// Same `up` and `down` at every state.
    pub fn homogeneous(k: usize, alpha: f64, up: f64, down: f64) -> Result<Self> {
        Self::new(k, alpha, vec![up; k], vec![down; k])
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    fn probs(&self, x: i64) -> (f64, f64) {
        let i = x.clamp(0, self.k as i64 - 1) as usize;
        (self.up[i], self.down[i])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BiasedWalkSolution {
    /// Probability of reaching 0 before `k`, starting at `k - 1`.
    pub hit_zero_before_k: f64,
    /// Expected steps to reach `k` from `k - 1` on the unrestricted walk.
    pub expected_time_to_k: f64,
}

impl BiasedWalkSolution {
    pub fn hit_bound(k: usize) -> f64 {
        2f64.powi(1 - k as i32)
    }

    pub fn time_bound(alpha: f64) -> f64 {
        2.0 / alpha
    }
}

pub fn biased_walk_solve(spec: &BiasedWalkSpec) -> Result<BiasedWalkSolution> {
    biased_walk_solve_with_floor(spec, DEFAULT_FLOOR)
}

pub fn biased_walk_solve_with_floor(spec: &BiasedWalkSpec, floor: i64) -> Result<BiasedWalkSolution> {
    Ok(BiasedWalkSolution {
        hit_zero_before_k: hit_probability(spec)?,
        expected_time_to_k: expected_time(spec, floor)?,
    })
}

/// `h(x) = P(hit 0 before k | X_0 = x)` on the interior `1..k-1`.
fn hit_probability(spec: &BiasedWalkSpec) -> Result<f64> {
    let k = spec.k;
    if k == 1 {
        return Ok(1.0);
    }
    let dim = k - 1;
    let mut a = DMatrix::<f64>::zeros(dim, dim);
    let mut rhs = DVector::<f64>::zeros(dim);
    for i in 0..dim {
        let x = (i + 1) as i64;
        let (u, d) = spec.probs(x);
        // h(x) (u + d) = u h(x+1) + d h(x-1), holds cancel
        a[(i, i)] = u + d;
        if i + 1 < dim {
            a[(i, i + 1)] = -u;
        }
        if i > 0 {
            a[(i, i - 1)] = -d;
        } else {
            rhs[i] += d;
        }
    }
    let sol = a.lu().solve(&rhs).ok_or(Error::Singular("hitting probability"))?;
    Ok(sol[dim - 1])
}

/// `e(x) = E[steps to k | X_0 = x]` on `floor..k-1` with a reflecting floor.
fn expected_time(spec: &BiasedWalkSpec, floor: i64) -> Result<f64> {
    let k = spec.k as i64;
    if floor >= k - 1 {
        return Err(Error::InvalidWalk(format!("floor {floor} must lie below k - 1 = {}", k - 1)));
    }
    let dim = (k - floor) as usize;
    let mut a = DMatrix::<f64>::zeros(dim, dim);
    let rhs = DVector::<f64>::from_element(dim, 1.0);
    for i in 0..dim {
        let x = floor + i as i64;
        let (u, d) = spec.probs(x);
        let d = if i == 0 { 0.0 } else { d };
        a[(i, i)] = u + d;
        if i + 1 < dim {
            a[(i, i + 1)] = -u;
        }
        if i > 0 {
            a[(i, i - 1)] = -d;
        }
    }
    let sol = a.lu().solve(&rhs).ok_or(Error::Singular("expected hitting time"))?;
    Ok(sol[dim - 1])
}
