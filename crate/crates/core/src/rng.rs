//! Deterministic random streams.
//!
//! Every frame, trial or sample shard gets its own ChaCha8 stream derived from
//! a master seed and a 64-bit stream id, so results do not depend on how work
//! is split across workers.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

/// Generator for stream `stream` of `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Stream id for frame `frame` at sweep point `point`.
pub fn frame_stream(point: u32, frame: u64) -> u64 {
    ((point as u64) << 40) | (frame & ((1 << 40) - 1))
}
