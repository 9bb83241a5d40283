//! Seed derivation and random streams.
//!
//! Every random stream in the crate is a ChaCha8 generator whose 256-bit key
//! is `SHA-256(seed_le || tag || index_le)`. Streams for different purposes
//! (fold shuffling, parameter sampling, per-block synthesis) never share
//! state, and any stream can be rebuilt independently from its coordinates,
//! which keeps parallel work reproducible.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

pub type StreamRng = ChaCha8Rng;

fn key(seed: u64, tag: &str, index: u64) -> [u8; 32] {
    let mut hasher = Sha256::new();
    hasher.update(seed.to_le_bytes());
    hasher.update((tag.len() as u64).to_le_bytes());
    hasher.update(tag.as_bytes());
    hasher.update(index.to_le_bytes());
    hasher.finalize().into()
}

/// Independent stream for `(seed, tag, index)`.
pub fn stream(seed: u64, tag: &str, index: u64) -> StreamRng {
    ChaCha8Rng::from_seed(key(seed, tag, index))
}

/// A derived 64-bit seed, for handing a sub-task its own seed space.
pub fn derive_seed(seed: u64, tag: &str, index: u64) -> u64 {
    let k = key(seed, tag, index);
    u64::from_le_bytes(k[..8].try_into().expect("8 bytes"))
}
