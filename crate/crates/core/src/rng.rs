//! Reproducible random streams.
//!
//! Every trial draws from its own ChaCha8 stream: the 256-bit key is expanded
//! from the master seed and the 64-bit stream id packs `(entry, trial)`.
//! Streams never overlap, so trials can run on any worker in any order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub type SimRng = ChaCha8Rng;

/// Identifies the random stream of one trial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TrialKey {
    pub seed: u64,
    pub entry: u32,
    pub trial: u32,
}

impl TrialKey {
    pub fn new(seed: u64, entry: u32, trial: u32) -> Self {
        Self { seed, entry, trial }
    }

    pub fn stream_id(&self) -> u64 {
        ((self.entry as u64) << 32) | self.trial as u64
    }

    pub fn rng(&self) -> SimRng {
        stream_rng(self.seed, self.stream_id())
    }
}

pub fn stream_rng(seed: u64, stream: u64) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
