//! Seeded random streams. Every consumer draws from its own ChaCha stream
//! derived from the single user seed, so adding draws in one place never
//! shifts the numbers seen elsewhere.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stream {
    FactorInit,
    GraphEdges,
    Migrants,
    Transitions,
    /// Edges of snapshot `t` in a temporal scenario.
    SnapshotEdges(u64),
}

impl Stream {
    fn id(self) -> u64 {
        match self {
            Stream::FactorInit => 1,
            Stream::GraphEdges => 2,
            Stream::Migrants => 3,
            Stream::Transitions => 4,
            Stream::SnapshotEdges(t) => 1 << 32 | t,
        }
    }
}

pub fn stream(seed: u64, which: Stream) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(which.id());
    rng
}
