//! Seeded random streams. Every parallel task draws from its own ChaCha
//! stream so results do not depend on scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

pub type LabRng = ChaCha20Rng;

pub fn from_seed(seed: u64) -> LabRng {
    ChaCha20Rng::seed_from_u64(seed)
}

/// Independent stream `task` under the master `seed`.
pub fn stream(seed: u64, task: u64) -> LabRng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(task);
    rng
}
