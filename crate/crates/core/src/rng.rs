//! Reproducible random streams.
//!
//! Every stream is a ChaCha8 generator keyed by a 64-bit seed and selected by
//! a 64-bit stream id; ChaCha is counter based, so the output is a pure
//! function of `(seed, stream, word position)` on every platform.
//!
//! Stream ids used by the simulator and estimators:
//!
//! | stream          | consumer                                   |
//! |-----------------|--------------------------------------------|
//! | `2 * r`         | realization of replicate `r`               |
//! | `2 * r + 1`     | query points / lines / rays of replicate `r` |
//!
//! A standalone realization built with [`crate::sim::sample_realization`]
//! uses stream 0, i.e. it coincides with replicate 0 of an estimator run
//! with the same seed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Stream = ChaCha8Rng;

pub fn stream(seed: u64, id: u64) -> Stream {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

pub fn realization_stream_id(replicate: u64) -> u64 {
    2 * replicate
}

pub fn query_stream_id(replicate: u64) -> u64 {
    2 * replicate + 1
}
