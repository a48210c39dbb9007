//! Seeded randomness.
//!
//! Every stochastic routine takes an explicit `u64` seed and draws from
//! ChaCha8 (`rand_chacha`), whose output stream is fixed by its algorithm and
//! independent of platform. Sub-seeds are the first 8 bytes (little endian)
//! of a SHA-256 digest over the labelled parts, so they do not depend on the
//! order in which cells are executed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

pub type Rng = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// One component of a derived seed.
#[derive(Debug, Clone, Copy)]
pub enum SeedPart<'a> {
    Int(u64),
    Str(&'a str),
}

pub fn derive_seed(master: u64, parts: &[SeedPart<'_>]) -> u64 {
    let mut h = Sha256::new();
    h.update(master.to_le_bytes());
    for part in parts {
        match part {
            SeedPart::Int(v) => {
                h.update([0u8]);
                h.update(v.to_le_bytes());
            }
            SeedPart::Str(s) => {
                h.update([1u8]);
                h.update((s.len() as u64).to_le_bytes());
                h.update(s.as_bytes());
            }
        }
    }
    let digest = h.finalize();
    let mut out = [0u8; 8];
    out.copy_from_slice(&digest[..8]);
    u64::from_le_bytes(out)
}
