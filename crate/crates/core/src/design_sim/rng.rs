//! Seeded random streams.
//!
//! Every stream is a ChaCha8 generator. Per-trial streams are keyed by
//! `(seed, trial, label)` through SHA-256, so the design, infection and
//! channel noise of one trial are reproducible independently of each other
//! and of the order in which trials run.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

pub type SimRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SimRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// First eight bytes (little-endian) of `SHA-256(seed ‖ trial ‖ label)`.
pub fn derive_seed(seed: u64, trial: u64, label: &str) -> u64 {
    let mut h = Sha256::new();
    h.update(seed.to_le_bytes());
    h.update(trial.to_le_bytes());
    h.update(label.as_bytes());
    let digest = h.finalize();
    let mut bytes = [0u8; 8];
    bytes.copy_from_slice(&digest[..8]);
    u64::from_le_bytes(bytes)
}
