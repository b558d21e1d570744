//! Seed derivation.
//!
//! Every random quantity is drawn from a ChaCha8 substream addressed by
//! `(seed, stream)`. ChaCha is counter based, so the numbers a given stream
//! produces do not depend on which other streams were consumed, in what
//! order, or on which thread.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use rand_chacha::ChaCha8Rng as StreamRng;

/// Generator for stream `stream` of the run keyed by `seed`.
pub fn substream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// A fresh seed for stream `stream` of the run keyed by `seed`, for APIs
/// that take a plain seed.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    use rand::RngCore;
    substream(seed, stream).next_u64()
}

/// Packs a trial number, a sweep position and a role bit into one stream id.
///
/// Layout: bits 32..64 trial, bits 1..32 position, bit 0 role. Adding trials
/// or positions never changes the ids of existing ones.
pub fn stream_id(trial: u32, position: u32, role: bool) -> u64 {
    debug_assert!(position < (1 << 31));
    (u64::from(trial) << 32) | (u64::from(position) << 1) | u64::from(role)
}
