//! Balanced two-type annihilating random walks on `K_{2n}` (with loops) and
//! `K_{n,n}`.
//!
//! * [`process`]: the particle system and its O(1) step.
//! * [`instrumentation`]: step observers that track goodness and split the
//!   extinction time at a stopping time.
//! * [`oracles`]: exact computations used as ground truth.
//! * [`experiments`]: seeded parallel plans and their outputs.

pub mod error;
pub mod experiments;
pub mod instrumentation;
pub mod oracles;
pub mod process;
pub mod rng;

pub use error::{Error, Result};
