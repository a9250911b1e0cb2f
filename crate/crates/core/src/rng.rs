//! Counter-based random streams.
//!
//! Every random decision made while sampling a world is a pure function of
//! `(round seed, key)`, where the key is an edge index (IC) or a node index
//! (LT). Worlds are therefore bit-identical no matter which worker samples
//! them, in what order edges are visited, or whether only the reachable part
//! of the world is ever materialized.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

/// SplitMix64 finalizer.
#[inline]
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[inline]
fn mix(a: u64, b: u64) -> u64 {
    splitmix64(a ^ splitmix64(b.wrapping_mul(GOLDEN)))
}

/// Root of a family of independent streams.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MasterSeed(pub u64);

impl MasterSeed {
    /// Child stream `index`, independent of every other child.
    pub fn derive(self, index: u64) -> MasterSeed {
        MasterSeed(mix(self.0, index ^ 0x5eed_0000_0000_0000))
    }

    /// Seed for sampling round `i`.
    pub fn round(self, i: u64) -> RoundSeed {
        RoundSeed(mix(self.0, i))
    }

    /// A sequential generator for decisions outside world sampling
    /// (heuristics, probability assignment, subgraph extraction).
    pub fn rng(self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.0)
    }
}

/// Seed of a single sampled world.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RoundSeed(pub u64);

impl RoundSeed {
    /// Uniform draw in `[0, 1)` attached to `key`.
    #[inline]
    pub fn uniform(self, key: u64) -> f64 {
        (mix(self.0, key) >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}
