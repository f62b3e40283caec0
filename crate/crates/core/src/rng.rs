//! Seeded, portable random streams.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The generator used by every sampling routine.
pub type SimRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SimRng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn same_seed_same_stream() {
        let a: Vec<u64> = seeded_rng(5).sample_iter(rand::distributions::Standard).take(8).collect();
        let b: Vec<u64> = seeded_rng(5).sample_iter(rand::distributions::Standard).take(8).collect();
        assert_eq!(a, b);
        let c: Vec<u64> = seeded_rng(6).sample_iter(rand::distributions::Standard).take(8).collect();
        assert_ne!(a, c);
    }
}
