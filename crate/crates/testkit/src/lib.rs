//! Random instance generators and brute-force reference implementations.
//!
//! The references work on explicit string sets and only rely on stepping
//! deterministic automata, so they share no construction with the library
//! code they are compared against.

pub mod gen;
pub mod oracle;

pub use rand_chacha::ChaCha8Rng;

use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
