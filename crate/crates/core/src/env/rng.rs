use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::Seed;

/// Independent random streams that share one seed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u64)]
pub enum SeedStream {
    EnvDynamics = 0,
    WrapperGate = 1,
    WrapperNoise = 2,
    Agent = 3,
    Evaluation = 4,
}

/// ChaCha8 generator for `(seed, stream, index)`.
///
/// `index` separates otherwise identical consumers, e.g. the position of a
/// wrapper in a stack. Streams never overlap because ChaCha's 64-bit stream
/// id is disjoint from its counter.
pub fn stream_rng(seed: Seed, stream: SeedStream, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.0);
    rng.set_stream((index << 8) | stream as u64);
    rng
}
