//! Independent exact references: the compressed Markov chain for small `n`,
//! the biased-walk solver, the inequality scan and the `K_{n,n}` trial law.

mod alternating;
mod bake;
mod bias_scan;
mod biased_walk;
mod exact;

pub use alternating::{
    alternating_identity_check, harmonic, knn_stationary_bounds, knn_term_lower, knn_term_upper, AlternatingTrialSpec,
    KnnBounds,
};
pub use bake::{oracle_bake, BakedConstant, BakedParams, OracleConstants, COMMITTED_CONSTANTS, CONSTANTS_VERSION};
pub use bias_scan::{bias_inequality_scan, blue_bias_holds, red_bias_holds, BiasViolation};
pub use biased_walk::{
    biased_walk_solve, biased_walk_solve_with_floor, BiasedWalkSolution, BiasedWalkSpec, DEFAULT_FLOOR,
};
pub use exact::{
    exact_chain, exact_extinction_expectation, initial_distribution, CompressedState, ExactChain, SiteOccupancy,
    MAX_BLOCK, MAX_STATES,
};
