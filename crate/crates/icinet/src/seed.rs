//! Deterministic seed derivation.
//!
//! Every randomized entry point takes one master seed and splits it into
//! named sub-streams (`"generation"`, `"simulation"`, `"chain"`, per-scenario
//! streams, ...). Derivation hashes the master seed together with the label,
//! so streams are statistically independent, stable across runs and
//! platforms, and insensitive to how many draws another stream consumed.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;
use sha2::{Digest, Sha256};

/// Derive the sub-seed for a named stream.
pub fn substream(master: u64, label: &str) -> u64 {
    let mut h = Sha256::new();
    h.update(master.to_le_bytes());
    h.update(label.as_bytes());
    let digest = h.finalize();
    u64::from_le_bytes(digest[..8].try_into().expect("digest is 32 bytes"))
}

/// Derive the sub-seed for the `i`-th member of a named stream family
/// (e.g. one stream per cascade scenario).
pub fn substream_indexed(master: u64, label: &str, i: u64) -> u64 {
    let mut h = Sha256::new();
    h.update(master.to_le_bytes());
    h.update(label.as_bytes());
    h.update(i.to_le_bytes());
    let digest = h.finalize();
    u64::from_le_bytes(digest[..8].try_into().expect("digest is 32 bytes"))
}

/// The random generator used throughout the crate, seeded from a sub-stream.
pub fn rng_for(seed: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed)
}
